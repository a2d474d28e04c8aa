use serde::Serialize;

use super::{Realization, RealizationError};
use crate::code::{format_word, BlockedCode};
use crate::linalg::MatrixF;

/// The full behavior B ⊆ A × S, blocks ordered symbols then states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    code: BlockedCode,
    symbol_ids: Vec<String>,
    state_ids: Vec<String>,
}

impl Behavior {
    pub fn code(&self) -> &BlockedCode {
        &self.code
    }

    pub fn dim(&self) -> usize {
        self.code.dim()
    }

    pub fn symbol_ids(&self) -> &[String] {
        &self.symbol_ids
    }

    pub fn state_ids(&self) -> &[String] {
        &self.state_ids
    }

    /// B projected onto the symbol blocks.
    pub fn realized_code(&self) -> BlockedCode {
        self.code.project(&self.symbol_ids).expect("symbol blocks exist")
    }

    /// `{s : (0, s) ∈ B}` on the state blocks.
    pub fn unobservable(&self) -> BlockedCode {
        self.code.cross_section(&self.state_ids).expect("state blocks exist")
    }

    pub fn project<S: AsRef<str>>(&self, ids: &[S]) -> BlockedCode {
        self.code.project(ids).expect("ids come from the topology")
    }
}

/// Local trim verdict for one (constraint, state) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimVerdict {
    pub trim: bool,
    /// A state value outside the projection when not trim.
    pub witness: Option<Vec<u32>>,
}

/// Properness verdict for one constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperVerdict {
    pub proper: bool,
    /// First offending state and a nonzero codeword of the constraint
    /// supported on that state alone.
    pub witness: Option<(String, Vec<u32>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    pub id: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateLocalReport {
    pub state: String,
    pub trim: bool,
    pub trim_witness: Option<String>,
    pub proper: bool,
    pub proper_witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub id: String,
    pub dim: usize,
    pub trim: bool,
    pub proper: bool,
    pub states: Vec<StateLocalReport>,
}

/// Everything `analyze` reports about a realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub field: u32,
    pub symbols: Vec<DimEntry>,
    pub states: Vec<DimEntry>,
    pub constraints: Vec<ConstraintReport>,
    pub symbol_dim: usize,
    pub state_dim: usize,
    pub constraint_dim_sum: usize,
    pub behavior_dim: usize,
    pub realized_code_dim: usize,
    pub unobservable_dim: usize,
    pub controllability_defect: usize,
    pub observable: bool,
    pub controllable: bool,
    pub state_trim: bool,
    pub branch_trim: bool,
    pub reduced: bool,
    pub locally_reducible: bool,
    pub cycle_free: bool,
    pub tail_biting: bool,
    /// Only decided on cycle-free graphs, where trim + proper everywhere is
    /// equivalent to minimality.
    pub minimal: Option<bool>,
}

impl Realization {
    /// Kernel of the stacked parity checks of every constraint code,
    /// embedded in the global frame.
    pub fn behavior(&self) -> Behavior {
        let global = self.global_structure();
        let n = global.total();
        let f = self.field;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (node, code) in self.topology.constraints.iter().zip(&self.codes) {
            let local_to_global: Vec<usize> = node
                .vars
                .iter()
                .flat_map(|v| global.range(v).expect("validated variable"))
                .collect();
            let h = code.space().parity_check();
            for row in h.row_iter() {
                let mut g = vec![0u32; n];
                for (&x, &col) in row.iter().zip(&local_to_global) {
                    g[col] = x;
                }
                rows.push(g);
            }
        }
        let checks = MatrixF::from_rows(f, n, &rows).expect("residues from canonical codes");
        let code = BlockedCode::new(global, checks.kernel()).expect("ambient matches");
        Behavior {
            code,
            symbol_ids: self.topology.symbols.iter().map(|s| s.id.clone()).collect(),
            state_ids: self.topology.states.iter().map(|s| s.id.clone()).collect(),
        }
    }

    pub fn realized_code(&self) -> BlockedCode {
        self.behavior().realized_code()
    }

    pub fn unobservable_behavior(&self) -> BlockedCode {
        self.behavior().unobservable()
    }

    pub fn is_observable(&self) -> bool {
        self.unobservable_behavior().dim() == 0
    }

    /// dim B − (Σ dim C_i − dim S); zero exactly when the constraints are
    /// independent.
    pub fn controllability_defect(&self) -> usize {
        self.defect_given(&self.behavior())
    }

    pub fn is_controllable(&self) -> bool {
        self.controllability_defect() == 0
    }

    fn defect_given(&self, behavior: &Behavior) -> usize {
        let lhs = behavior.dim() + self.state_dim();
        let rhs = self.constraint_dim_sum();
        debug_assert!(lhs >= rhs, "defect is never negative");
        lhs - rhs
    }

    /// Is `constraint` trim at `state`: does its projection onto the state
    /// fill the whole state space?
    pub fn trim_verdict(&self, constraint: &str, state: &str) -> Result<TrimVerdict, RealizationError> {
        let code = self.local_code_with_state(constraint, state)?;
        let proj = code.project(&[state])?;
        if proj.space().is_full() {
            return Ok(TrimVerdict {
                trim: true,
                witness: None,
            });
        }
        let d = proj.length();
        let witness = (0..d)
            .map(|k| {
                let mut e = vec![0u32; d];
                e[k] = 1;
                e
            })
            .find(|e| !proj.contains(e).expect("length matches"));
        Ok(TrimVerdict {
            trim: false,
            witness,
        })
    }

    pub fn is_trim(&self, constraint: &str, state: &str) -> Result<bool, RealizationError> {
        Ok(self.trim_verdict(constraint, state)?.trim)
    }

    /// Is `constraint` proper: no nonzero codeword supported on a single
    /// state block.
    pub fn proper_verdict(&self, constraint: &str) -> Result<ProperVerdict, RealizationError> {
        let i = self
            .topology
            .constraint_index(constraint)
            .ok_or_else(|| RealizationError::UnknownConstraint(constraint.to_string()))?;
        let node = &self.topology.constraints[i];
        let code = &self.codes[i];
        for state in self.topology.states_of(node) {
            if let Some(word) = cross_section_witness(code, state)? {
                return Ok(ProperVerdict {
                    proper: false,
                    witness: Some((state.to_string(), word)),
                });
            }
        }
        Ok(ProperVerdict {
            proper: true,
            witness: None,
        })
    }

    pub fn is_proper(&self, constraint: &str) -> Result<bool, RealizationError> {
        Ok(self.proper_verdict(constraint)?.proper)
    }

    /// Projection of B onto every state space is onto.
    pub fn is_state_trim(&self) -> bool {
        self.state_trim_given(&self.behavior())
    }

    /// Projection of B onto the variables of every constraint equals the
    /// constraint code.
    pub fn is_branch_trim(&self) -> bool {
        self.branch_trim_given(&self.behavior())
    }

    pub fn is_reduced(&self) -> bool {
        let b = self.behavior();
        self.state_trim_given(&b) && self.branch_trim_given(&b)
    }

    fn state_trim_given(&self, b: &Behavior) -> bool {
        self.topology
            .states
            .iter()
            .all(|s| b.project(&[&s.id]).space().is_full())
    }

    fn branch_trim_given(&self, b: &Behavior) -> bool {
        self.topology
            .constraints
            .iter()
            .zip(&self.codes)
            .all(|(node, code)| &b.project(&node.vars) == code)
    }

    fn local_code_with_state(&self, constraint: &str, state: &str) -> Result<&BlockedCode, RealizationError> {
        let code = self.code(constraint)?;
        if !self.topology.is_state(state) {
            return Err(RealizationError::UnknownState(state.to_string()));
        }
        if code.structure().position(state).is_none() {
            return Err(RealizationError::StateNotInvolved {
                constraint: constraint.to_string(),
                state: state.to_string(),
            });
        }
        Ok(code)
    }

    pub fn analyze(&self) -> AnalysisReport {
        let b = self.behavior();
        let f = self.field;
        let realized = b.realized_code();
        let unobs = b.unobservable();
        let defect = self.defect_given(&b);
        let state_trim = self.state_trim_given(&b);
        let branch_trim = self.branch_trim_given(&b);

        let constraints: Vec<ConstraintReport> = self
            .topology
            .constraints
            .iter()
            .zip(&self.codes)
            .map(|(node, code)| {
                let states: Vec<StateLocalReport> = self
                    .topology
                    .states_of(node)
                    .map(|s| {
                        let t = self.trim_verdict(&node.id, s).expect("state is local");
                        let cross = cross_section_witness(code, s).expect("state is local");
                        StateLocalReport {
                            state: s.to_string(),
                            trim: t.trim,
                            trim_witness: t.witness.map(|w| format_word(f, &w)),
                            proper: cross.is_none(),
                            proper_witness: cross.map(|w| format_word(f, &w)),
                        }
                    })
                    .collect();
                ConstraintReport {
                    id: node.id.clone(),
                    dim: code.dim(),
                    trim: states.iter().all(|s| s.trim),
                    proper: states.iter().all(|s| s.proper),
                    states,
                }
            })
            .collect();

        let all_trim_proper = constraints.iter().all(|c| c.trim && c.proper);
        let cycle_free = self.topology.is_cycle_free();
        AnalysisReport {
            field: f.modulus(),
            symbols: dims(self.topology.symbols.iter().map(|s| (&s.id, s.dim))),
            states: dims(self.topology.states.iter().map(|s| (&s.id, s.dim))),
            symbol_dim: self.symbol_dim(),
            state_dim: self.state_dim(),
            constraint_dim_sum: self.constraint_dim_sum(),
            behavior_dim: b.dim(),
            realized_code_dim: realized.dim(),
            unobservable_dim: unobs.dim(),
            controllability_defect: defect,
            observable: unobs.dim() == 0,
            controllable: defect == 0,
            state_trim,
            branch_trim,
            reduced: state_trim && branch_trim,
            locally_reducible: !all_trim_proper || unobs.dim() > 0 || defect > 0,
            cycle_free,
            tail_biting: self.topology.is_tail_biting(),
            minimal: cycle_free.then_some(all_trim_proper),
            constraints,
        }
    }
}

fn dims<'a>(it: impl Iterator<Item = (&'a String, usize)>) -> Vec<DimEntry> {
    it.map(|(id, dim)| DimEntry { id: id.clone(), dim }).collect()
}

/// A nonzero codeword of `code` supported on block `state` only, if any,
/// padded to the full local length.
fn cross_section_witness(code: &BlockedCode, state: &str) -> Result<Option<Vec<u32>>, RealizationError> {
    let cross = code.cross_section(&[state])?;
    if cross.dim() == 0 {
        return Ok(None);
    }
    let range = code.structure().range(state).expect("state present");
    let mut word = vec![0u32; code.length()];
    word[range].copy_from_slice(cross.generators().row(0));
    Ok(Some(word))
}
