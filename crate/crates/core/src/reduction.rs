//! Local reductions of a single state space and the cycle-free minimizer.
//!
//! Two dual operations shrink a state space without changing the realized
//! code: *trimming* restricts it to a subspace that every valid trajectory
//! already lives in, *merging* maps it onto a quotient by a subspace that the
//! constraints cannot distinguish. Unobservable realizations are trimmed along
//! a nonzero `(0, s)` trajectory; uncontrollable ones are merged by doing that
//! trim on the dual and dualizing back.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::code::{BlockedCode, CodeError};
use crate::linalg::MatrixF;
use crate::realization::{Realization, RealizationError, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("constraint `{constraint}` is already trim at state `{state}`")]
    AlreadyTrim { constraint: String, state: String },
    #[error("constraint `{constraint}` has no nonzero codeword supported on state `{state}`")]
    AlreadyProper { constraint: String, state: String },
    #[error("realization is observable")]
    Observable,
    #[error("realization is controllable")]
    Controllable,
    #[error("graph has a cycle")]
    NotCycleFree,
    #[error("code blocks {found:?} do not match the topology symbols {expected:?}")]
    SymbolMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("cut at state `{state}`: past gives {past}, future gives {future}")]
    InconsistentCut { state: String, past: usize, future: usize },
    #[error("constraint order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Trim,
    Merge,
    UnobservabilityTrim,
    DualMerge,
}

/// Log entry for one local reduction.
///
/// `basis_change` is `new_dim × old_dim` with full row rank. For trims its
/// rows are a basis of the retained subspace, so old coordinates are
/// `t · basis_change`; for merges it is the quotient map, so new coordinates
/// are `basis_change · s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub state: String,
    pub constraint: Option<String>,
    pub old_dim: usize,
    pub new_dim: usize,
    #[serde(serialize_with = "serialize_rows")]
    pub basis_change: MatrixF,
}

fn serialize_rows<S: Serializer>(m: &MatrixF, s: S) -> Result<S::Ok, S::Error> {
    m.to_rows().serialize(s)
}

/// Replaces state `state` by the row space of `basis` (`new × old`).
fn restrict(r: &Realization, state: &str, basis: &MatrixF) -> Result<Realization, ReductionError> {
    Ok(r.rewrite_state(state, basis.rows(), |c| c.pullback_block(state, basis))?)
}

/// Maps state `state` through `q` (`old × new`).
fn quotient(r: &Realization, state: &str, q: &MatrixF) -> Result<Realization, ReductionError> {
    Ok(r.rewrite_state(state, q.cols(), |c| c.pushforward_block(state, q))?)
}

fn state_dim(r: &Realization, state: &str) -> Result<usize, ReductionError> {
    r.topology()
        .state(state)
        .map(|s| s.dim)
        .ok_or_else(|| RealizationError::UnknownState(state.to_string()).into())
}

/// Restricts `state` to the projection of `constraint`'s code onto it.
pub fn trim_state(
    r: &Realization,
    state: &str,
    constraint: &str,
) -> Result<(Realization, ReductionStep), ReductionError> {
    if r.trim_verdict(constraint, state)?.trim {
        return Err(ReductionError::AlreadyTrim {
            constraint: constraint.to_string(),
            state: state.to_string(),
        });
    }
    let old_dim = state_dim(r, state)?;
    let reachable = r.code(constraint)?.project(&[state])?;
    let basis = reachable.generators().clone();
    let out = restrict(r, state, &basis)?;
    Ok((
        out,
        ReductionStep {
            kind: ReductionKind::Trim,
            state: state.to_string(),
            constraint: Some(constraint.to_string()),
            old_dim,
            new_dim: basis.rows(),
            basis_change: basis,
        },
    ))
}

/// Quotient map `F^d → F^d / T` as a `d × (d - dim T)` matrix, using the
/// standard-basis completion of `T` as coordinates of the quotient.
fn quotient_map(t: &BlockedCode) -> MatrixF {
    let d = t.length();
    let keep = d - t.dim();
    let full = t.generators().complete_basis();
    // rows of `full`: basis of T, then complement vectors; reorder to put
    // the complement first so the first `keep` coordinates survive
    let mut order: Vec<usize> = (t.dim()..d).collect();
    order.extend(0..t.dim());
    let reordered = full.transpose().select_columns(&order).transpose();
    let inv = reordered.inverse().expect("completed basis is invertible");
    inv.select_columns(&(0..keep).collect::<Vec<_>>())
}

/// Merges `state` modulo the cross-section of `constraint`'s code on it.
pub fn merge_state(
    r: &Realization,
    state: &str,
    constraint: &str,
) -> Result<(Realization, ReductionStep), ReductionError> {
    let code = r.code(constraint)?;
    if code.structure().position(state).is_none() || !r.topology().is_state(state) {
        return Err(RealizationError::StateNotInvolved {
            constraint: constraint.to_string(),
            state: state.to_string(),
        }
        .into());
    }
    let t = code.cross_section(&[state])?;
    if t.dim() == 0 {
        return Err(ReductionError::AlreadyProper {
            constraint: constraint.to_string(),
            state: state.to_string(),
        });
    }
    let old_dim = t.length();
    let q = quotient_map(&t);
    let out = quotient(r, state, &q)?;
    Ok((
        out,
        ReductionStep {
            kind: ReductionKind::Merge,
            state: state.to_string(),
            constraint: Some(constraint.to_string()),
            old_dim,
            new_dim: q.cols(),
            basis_change: q.transpose(),
        },
    ))
}

/// Trims one dimension off the first state in the support of the first
/// basis vector of the unobservable behavior.
pub fn reduce_unobservable(r: &Realization) -> Result<(Realization, ReductionStep), ReductionError> {
    let b = r.behavior();
    let unobs = b.unobservable();
    if unobs.dim() == 0 {
        return Err(ReductionError::Observable);
    }
    let s = unobs.generators().row(0);
    let (state, s_j) = r
        .topology()
        .states
        .iter()
        .map(|sv| (sv.id.clone(), unobs.block_of(s, &sv.id).expect("state block")))
        .find(|(_, v)| v.iter().any(|&x| x != 0))
        .expect("nonzero unobservable trajectory has a nonzero state");
    let d = s_j.len();
    let first = MatrixF::from_rows(r.field(), d, &[s_j]).expect("residues");
    let full = first.complete_basis();
    // T_j: everything with first coordinate zero in the basis {s_j, ...}
    let kept = full.transpose().select_columns(&(1..d).collect::<Vec<_>>()).transpose();
    let out = restrict(r, &state, &kept)?;
    Ok((
        out,
        ReductionStep {
            kind: ReductionKind::UnobservabilityTrim,
            state,
            constraint: None,
            old_dim: d,
            new_dim: d - 1,
            basis_change: kept,
        },
    ))
}

/// Merge dual to [`reduce_unobservable`]: trims the dual realization and
/// dualizes back, deleting one coordinate of one state.
pub fn dual_merge_unobservable(r: &Realization) -> Result<(Realization, ReductionStep), ReductionError> {
    if r.is_controllable() {
        return Err(ReductionError::Controllable);
    }
    let (reduced_dual, mut step) = reduce_unobservable(&r.dualize())?;
    step.kind = ReductionKind::DualMerge;
    Ok((reduced_dual.dualize(), step))
}

/// First applicable trim or merge: constraints in `order`, states in
/// topology order, trim before merge.
fn next_local(r: &Realization, order: &[usize]) -> Result<Option<(ReductionKind, String, String)>, ReductionError> {
    let t = r.topology();
    for &i in order {
        let node = &t.constraints[i];
        let mut states: Vec<&str> = t.states_of(node).collect();
        states.sort_by_key(|s| t.state_index(s));
        for s in states {
            if !r.is_trim(&node.id, s)? {
                return Ok(Some((ReductionKind::Trim, node.id.clone(), s.to_string())));
            }
            if r.codes()[i].cross_section(&[s])?.dim() > 0 {
                return Ok(Some((ReductionKind::Merge, node.id.clone(), s.to_string())));
            }
        }
    }
    Ok(None)
}

fn check_order(t: &Topology, order: &[usize]) -> Result<(), ReductionError> {
    let n = t.constraints.len();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(ReductionError::BadOrder(n));
        }
        seen[i] = true;
    }
    if order.len() != n {
        return Err(ReductionError::BadOrder(n));
    }
    Ok(())
}

/// Applies trims and merges until every constraint is trim and proper.
/// Terminates on any graph since each step lowers the total state dimension.
pub fn local_fixpoint(r: &Realization, order: &[usize]) -> Result<(Realization, Vec<ReductionStep>), ReductionError> {
    check_order(r.topology(), order)?;
    let mut cur = r.clone();
    let mut steps = Vec::new();
    while let Some((kind, constraint, state)) = next_local(&cur, order)? {
        let (next, step) = match kind {
            ReductionKind::Trim => trim_state(&cur, &state, &constraint)?,
            _ => merge_state(&cur, &state, &constraint)?,
        };
        steps.push(step);
        cur = next;
    }
    Ok((cur, steps))
}

/// Minimal realization on a cycle-free graph: trim/merge to the fixpoint,
/// scanning constraints in index order.
pub fn minimize_cycle_free(r: &Realization) -> Result<(Realization, Vec<ReductionStep>), ReductionError> {
    let order: Vec<usize> = (0..r.topology().constraints.len()).collect();
    minimize_cycle_free_with_order(r, &order)
}

/// [`minimize_cycle_free`] with an explicit constraint scan order.
pub fn minimize_cycle_free_with_order(
    r: &Realization,
    order: &[usize],
) -> Result<(Realization, Vec<ReductionStep>), ReductionError> {
    if !r.topology().is_cycle_free() {
        return Err(ReductionError::NotCycleFree);
    }
    local_fixpoint(r, order)
}

/// Full reduction on any graph: local trims and merges first, then
/// unobservability trims, then dual merges, until none applies. The result
/// is trim, proper, observable and controllable; on graphs with cycles it
/// need not be minimal.
pub fn reduce_to_fixpoint(r: &Realization) -> Result<(Realization, Vec<ReductionStep>), ReductionError> {
    let order: Vec<usize> = (0..r.topology().constraints.len()).collect();
    let mut cur = r.clone();
    let mut steps = Vec::new();
    loop {
        let (next, local) = local_fixpoint(&cur, &order)?;
        steps.extend(local);
        cur = next;
        if !cur.is_observable() {
            let (next, step) = reduce_unobservable(&cur)?;
            steps.push(step);
            cur = next;
        } else if !cur.is_controllable() {
            let (next, step) = dual_merge_unobservable(&cur)?;
            steps.push(step);
            cur = next;
        } else {
            return Ok((cur, steps));
        }
    }
}

/// Dimensions at one edge of a cycle-free graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutDims {
    pub state: String,
    pub past_projection: usize,
    pub past_cross_section: usize,
    pub future_projection: usize,
    pub future_cross_section: usize,
    /// dim C|P − dim C:P, which equals the future-side difference.
    pub minimal_dim: usize,
}

/// Minimal state dimensions for every edge: removing edge `j` splits
/// the symbols into a past `P` (the `left` side) and a future `F`; the
/// minimal state dimension is `dim C|P − dim C:P = dim C|F − dim C:F`.
pub fn cut_dims(code: &BlockedCode, topology: &Topology) -> Result<Vec<CutDims>, ReductionError> {
    if !topology.is_cycle_free() {
        return Err(ReductionError::NotCycleFree);
    }
    let expected: Vec<String> = topology.symbols.iter().map(|s| s.id.clone()).collect();
    let mut found: Vec<String> = code.structure().ids().map(str::to_string).collect();
    let mut sorted_expected = expected.clone();
    sorted_expected.sort();
    found.sort();
    if found != sorted_expected {
        return Err(ReductionError::SymbolMismatch { expected, found });
    }
    let mut out = Vec::with_capacity(topology.states.len());
    for (j, s) in topology.states.iter().enumerate() {
        let past_nodes = topology.side_of_cut(j);
        let in_past = |sym: &str| {
            past_nodes
                .iter()
                .any(|&i| topology.constraints[i].vars.iter().any(|v| v == sym))
        };
        let (past, future): (Vec<&str>, Vec<&str>) = expected.iter().map(String::as_str).partition(|sym| in_past(sym));
        let pp = code.project(&past)?.dim();
        let pc = code.cross_section(&past)?.dim();
        let fp = code.project(&future)?.dim();
        let fc = code.cross_section(&future)?.dim();
        if pp - pc != fp - fc {
            return Err(ReductionError::InconsistentCut {
                state: s.id.clone(),
                past: pp - pc,
                future: fp - fc,
            });
        }
        out.push(CutDims {
            state: s.id.clone(),
            past_projection: pp,
            past_cross_section: pc,
            future_projection: fp,
            future_cross_section: fc,
            minimal_dim: pp - pc,
        });
    }
    Ok(out)
}
