//! Standard realization builders and trajectory-graph connectivity.
//!
//! * [`generator_realization`]: one equality node per generator fanning its
//!   coefficient out to replicas, one linear node per symbol position.
//! * [`parity_check_realization`]: the Tanner-style dual of the above.
//! * [`product_trellis`]: conventional or tail-biting trellis assembled as a
//!   product of single-generator trellises over circular spans.
//! * [`trajectory_components`]: connected components of the graph whose nodes
//!   are reachable state values and whose edges are valid branches.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{format_word, BlockedCode, CodeError};
use crate::linalg::{MatrixF, PrimeField};
use crate::oracle::EnumerationBudget;
use crate::realization::{ConstraintNode, Realization, RealizationError, StateVar, SymbolVar, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("at least one row is required")]
    NoRows,
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} contains {value}, not a residue mod {modulus}")]
    Residue { row: usize, value: u32, modulus: u32 },
    #[error("row {row} is zero")]
    ZeroRow { row: usize },
    #[error("position {position} is zero in every row, so its node would be isolated")]
    ZeroColumn { position: usize },
    #[error("{spans} spans given for {generators} generators")]
    SpanCount { spans: usize, generators: usize },
    #[error("span of generator {generator} has an endpoint outside 0..{n}")]
    SpanOutOfRange { generator: usize, n: usize },
    #[error("generator {generator} is nonzero at position {position}, outside its span")]
    EntryOutsideSpan { generator: usize, position: usize },
    #[error("generator {generator}: conventional trellises need non-wrapping, non-degenerate spans")]
    CircularSpanInConventional { generator: usize },
    #[error("a tail-biting trellis needs at least 2 sections, got {0}")]
    TooShort(usize),
    #[error("cannot parse span `{0}` (expected `start:end` or `deg`)")]
    BadSpan(String),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn check_rows(field: PrimeField, n: usize, rows: &[Vec<u32>]) -> Result<(), ConstructionError> {
    if rows.is_empty() {
        return Err(ConstructionError::NoRows);
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(ConstructionError::RowLength {
                row: i,
                expected: n,
                found: row.len(),
            });
        }
        if let Some(&value) = row.iter().find(|&&x| !field.contains(x)) {
            return Err(ConstructionError::Residue {
                row: i,
                value,
                modulus: field.modulus(),
            });
        }
        if row.iter().all(|&x| x == 0) {
            return Err(ConstructionError::ZeroRow { row: i });
        }
    }
    Ok(())
}

fn symbol_id(k: usize) -> String {
    format!("a{k}")
}

/// State id of the replica of row `i` at position `k`.
pub fn replica_id(i: usize, k: usize) -> String {
    format!("g{i}@p{k}")
}

/// Shared topology of generator and parity-check realizations: row nodes
/// `g{i}` first, then position nodes `p{k}`; one replica edge per nonzero
/// matrix entry, negated at the position node.
fn replica_topology(n: usize, rows: &[Vec<u32>]) -> Result<Topology, ConstructionError> {
    if let Some(position) = (0..n).find(|&k| rows.iter().all(|r| r[k] == 0)) {
        return Err(ConstructionError::ZeroColumn { position });
    }
    let mut t = Topology {
        symbols: (0..n).map(|k| SymbolVar { id: symbol_id(k), dim: 1 }).collect(),
        ..Topology::default()
    };
    for (i, row) in rows.iter().enumerate() {
        let vars: Vec<String> = (0..n).filter(|&k| row[k] != 0).map(|k| replica_id(i, k)).collect();
        t.constraints.push(ConstraintNode::new(format!("g{i}"), vars));
    }
    for k in 0..n {
        let mut vars = vec![symbol_id(k)];
        for (i, row) in rows.iter().enumerate() {
            if row[k] != 0 {
                vars.push(replica_id(i, k));
                t.states
                    .push(StateVar::new(replica_id(i, k), 1, format!("g{i}"), format!("p{k}")));
            }
        }
        t.constraints.push(ConstraintNode::new(format!("p{k}"), vars));
    }
    Ok(t)
}

/// Realization of the row span of `generators`: equality constraint `g{i}`
/// replicates the coefficient of generator `i`, position constraint `p{k}`
/// enforces `a_k = Σ_i g_ik α_ik`. Replicas with `g_ik = 0` are omitted.
pub fn generator_realization(
    field: PrimeField,
    n: usize,
    generators: &[Vec<u32>],
) -> Result<Realization, ConstructionError> {
    check_rows(field, n, generators)?;
    let topology = replica_topology(n, generators)?;
    let mut rows = Vec::with_capacity(topology.constraints.len());
    for node in &topology.constraints[..generators.len()] {
        rows.push(vec![vec![1u32; node.vars.len()]]);
    }
    for k in 0..n {
        // (g_ik, e_i) for each replica at this position
        let support: Vec<usize> = (0..generators.len()).filter(|&i| generators[i][k] != 0).collect();
        let width = support.len() + 1;
        let local = support
            .iter()
            .enumerate()
            .map(|(slot, &i)| {
                let mut v = vec![0u32; width];
                v[0] = generators[i][k];
                v[slot + 1] = 1;
                v
            })
            .collect();
        rows.push(local);
    }
    Ok(Realization::from_generator_rows(field, topology, rows)?)
}

/// Parity-check (Tanner) realization of the null space of `checks`:
/// zero-sum constraint `g{i}` per check row and a replica constraint `p{k}`
/// per position with `s_ik = h_ik a_k`. Equal to the dual of
/// [`generator_realization`] on the same rows.
pub fn parity_check_realization(
    field: PrimeField,
    n: usize,
    checks: &[Vec<u32>],
) -> Result<Realization, ConstructionError> {
    check_rows(field, n, checks)?;
    let topology = replica_topology(n, checks)?;
    let mut codes = Vec::with_capacity(topology.constraints.len());
    for node in &topology.constraints[..checks.len()] {
        let ones = MatrixF::from_rows(field, node.vars.len(), &[vec![1u32; node.vars.len()]])
            .expect("ones are residues");
        let zero_sum = BlockedCode::new(topology.constraint_structure(node), ones.kernel())?;
        codes.push(zero_sum);
    }
    for (k, node) in topology.constraints[checks.len()..].iter().enumerate() {
        let mut row = vec![1u32];
        row.extend(checks.iter().filter(|h| h[k] != 0).map(|h| h[k]));
        codes.push(BlockedCode::from_generators(
            field,
            topology.constraint_structure(node),
            &[row],
        )?);
    }
    Ok(Realization::new(field, topology, codes)?)
}

/// Circular span of a generator in a product trellis.
///
/// Edge `j` sits between positions `j - 1` and `j` (mod n). A span `a:b`
/// covers positions `a, a+1, ..., b` circularly and crosses the edges
/// entered along the way; `a:a` crosses nothing. A degenerate span covers
/// every position and crosses every edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub degenerate: bool,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self {
            start,
            end,
            degenerate: false,
        }
    }

    pub fn degenerate() -> Self {
        Self {
            start: 0,
            end: 0,
            degenerate: true,
        }
    }

    pub fn wraps(&self) -> bool {
        !self.degenerate && self.end < self.start
    }

    pub fn covered_positions(&self, n: usize) -> Vec<usize> {
        if self.degenerate {
            return (0..n).collect();
        }
        let len = (self.end + n - self.start) % n + 1;
        (0..len).map(|d| (self.start + d) % n).collect()
    }

    pub fn crossed_edges(&self, n: usize) -> Vec<usize> {
        if self.degenerate {
            return (0..n).collect();
        }
        self.covered_positions(n).into_iter().skip(1).collect()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degenerate {
            write!(f, "deg")
        } else {
            write!(f, "{}:{}", self.start, self.end)
        }
    }
}

impl FromStr for Span {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("deg") || s.eq_ignore_ascii_case("degenerate") {
            return Ok(Span::degenerate());
        }
        let bad = || ConstructionError::BadSpan(s.to_string());
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok(Span::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannedGenerator {
    pub vector: Vec<u32>,
    pub span: Span,
}

impl SpannedGenerator {
    pub fn new(vector: Vec<u32>, span: Span) -> Self {
        Self { vector, span }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrellisKind {
    Conventional,
    TailBiting,
}

impl FromStr for TrellisKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conventional" => Ok(Self::Conventional),
            "tail-biting" | "tailbiting" => Ok(Self::TailBiting),
            other => Err(format!("unknown trellis kind `{other}`")),
        }
    }
}

/// Product trellis: section `c{i}` constrains `(s{i}, a{i}, s{i+1})`, state
/// `s{j}` holds one coordinate per generator whose span crosses edge `j`.
/// Conventional trellises omit the boundary states `s0` and `s{n}`.
pub fn product_trellis(
    field: PrimeField,
    n: usize,
    gens: &[SpannedGenerator],
    kind: TrellisKind,
) -> Result<Realization, ConstructionError> {
    let vectors: Vec<Vec<u32>> = gens.iter().map(|g| g.vector.clone()).collect();
    check_rows(field, n, &vectors)?;
    if kind == TrellisKind::TailBiting && n < 2 {
        return Err(ConstructionError::TooShort(n));
    }
    let mut crossing: Vec<Vec<bool>> = Vec::with_capacity(gens.len());
    for (gi, g) in gens.iter().enumerate() {
        let span = g.span;
        if !span.degenerate && (span.start >= n || span.end >= n) {
            return Err(ConstructionError::SpanOutOfRange { generator: gi, n });
        }
        if kind == TrellisKind::Conventional && (span.degenerate || span.wraps()) {
            return Err(ConstructionError::CircularSpanInConventional { generator: gi });
        }
        let covered = span.covered_positions(n);
        if let Some(position) = (0..n).find(|&k| g.vector[k] != 0 && !covered.contains(&k)) {
            return Err(ConstructionError::EntryOutsideSpan {
                generator: gi,
                position,
            });
        }
        let mut row = vec![false; n];
        for e in span.crossed_edges(n) {
            row[e] = true;
        }
        crossing.push(row);
    }

    let has_state = |j: usize| kind == TrellisKind::TailBiting || (1..n).contains(&j);
    // slot of generator g inside state j
    let slots: Vec<HashMap<usize, usize>> = (0..n)
        .map(|j| {
            (0..gens.len())
                .filter(|&g| crossing[g][j])
                .enumerate()
                .map(|(slot, g)| (g, slot))
                .collect()
        })
        .collect();

    let state_id = |j: usize| format!("s{j}");
    let mut topology = Topology {
        symbols: (0..n).map(|k| SymbolVar { id: symbol_id(k), dim: 1 }).collect(),
        ..Topology::default()
    };
    for j in (0..n).filter(|&j| has_state(j)) {
        let left = (j + n - 1) % n;
        topology.states.push(StateVar::new(
            state_id(j),
            slots[j].len(),
            format!("c{left}"),
            format!("c{j}"),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let before = has_state(i).then_some(i);
        let after = has_state((i + 1) % n).then_some((i + 1) % n);
        let mut vars = Vec::new();
        if let Some(j) = before {
            vars.push(state_id(j));
        }
        vars.push(symbol_id(i));
        if let Some(j) = after {
            vars.push(state_id(j));
        }
        topology.constraints.push(ConstraintNode::new(format!("c{i}"), vars));

        let width_before = before.map_or(0, |j| slots[j].len());
        let width_after = after.map_or(0, |j| slots[j].len());
        let mut local = Vec::new();
        for (g, gen) in gens.iter().enumerate() {
            let mut v = vec![0u32; width_before + 1 + width_after];
            if let Some(&slot) = before.and_then(|j| slots[j].get(&g)) {
                v[slot] = 1;
            }
            v[width_before] = gen.vector[i];
            if let Some(&slot) = after.and_then(|j| slots[j].get(&g)) {
                v[width_before + 1 + slot] = 1;
            }
            if v.iter().any(|&x| x != 0) {
                local.push(v);
            }
        }
        rows.push(local);
    }
    Ok(Realization::from_generator_rows(field, topology, rows)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComponentsError {
    #[error("projection with {size} points exceeds the enumeration budget {cap}")]
    BudgetExceeded { size: u128, cap: u64 },
}

/// State values of one state grouped by trajectory-graph component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateClasses {
    pub state: String,
    /// `(component index, values)` pairs, component indices ascending.
    pub classes: Vec<(usize, Vec<String>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentsReport {
    pub components: usize,
    pub partition: Vec<StateClasses>,
    pub controllability_defect: usize,
    /// Whether the realization is a reduced tail-biting trellis, the setting
    /// in which "uncontrollable ⟺ more than one component" is guaranteed.
    pub reduced_tail_biting: bool,
    /// Whether that equivalence holds here; `None` when it is not claimed.
    pub equivalence_holds: Option<bool>,
    pub warning: Option<String>,
}

/// Components of the trajectory graph: one node per state value that occurs
/// in the behavior, and every branch in the projection of the behavior onto a
/// constraint's variables links the state values it passes through.
pub fn trajectory_components(
    r: &Realization,
    budget: EnumerationBudget,
) -> Result<ComponentsReport, ComponentsError> {
    let b = r.behavior();
    let t = r.topology();
    let f = r.field();
    let cap = budget.max_points();
    let enumerate = |c: &BlockedCode| {
        c.enumerate(cap).map_err(|e| match e {
            CodeError::EnumerationTooLarge { size, cap } => ComponentsError::BudgetExceeded { size, cap },
            other => unreachable!("enumeration only fails on size: {other}"),
        })
    };

    let mut node_of: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let mut values_per_state: Vec<Vec<Vec<u32>>> = Vec::with_capacity(t.states.len());
    for (j, s) in t.states.iter().enumerate() {
        let values = enumerate(&b.project(&[&s.id]))?;
        for v in &values {
            let next = node_of.len();
            node_of.insert((j, v.clone()), next);
        }
        values_per_state.push(values);
    }

    let mut uf = UnionFind::<usize>::new(node_of.len());
    for node in &t.constraints {
        let branches = enumerate(&b.project(&node.vars))?;
        let local = t.constraint_structure(node);
        let states: Vec<(usize, std::ops::Range<usize>)> = t
            .states_of(node)
            .map(|s| (t.state_index(s).expect("state"), local.range(s).expect("block")))
            .collect();
        for br in &branches {
            let ids: Vec<usize> = states
                .iter()
                .map(|(j, range)| node_of[&(*j, br[range.clone()].to_vec())])
                .collect();
            for w in ids.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }

    // number components by first appearance in state order
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut partition = Vec::with_capacity(t.states.len());
    for (j, s) in t.states.iter().enumerate() {
        let mut classes: Vec<(usize, Vec<String>)> = Vec::new();
        for v in &values_per_state[j] {
            let root = uf.find(node_of[&(j, v.clone())]);
            let next = label.len();
            let c = *label.entry(root).or_insert(next);
            match classes.iter_mut().find(|(k, _)| *k == c) {
                Some((_, vals)) => vals.push(format_word(f, v)),
                None => classes.push((c, vec![format_word(f, v)])),
            }
        }
        classes.sort_by_key(|(k, _)| *k);
        partition.push(StateClasses {
            state: s.id.clone(),
            classes,
        });
    }
    let components = if t.states.is_empty() {
        1
    } else {
        (0..node_of.len()).map(|i| uf.find(i)).collect::<std::collections::HashSet<_>>().len()
    };

    let defect = r.controllability_defect();
    let reduced_tail_biting = t.is_tail_biting() && r.is_reduced();
    let (equivalence_holds, warning) = if reduced_tail_biting {
        (Some((defect > 0) == (components > 1)), None)
    } else {
        (
            None,
            Some("not a reduced tail-biting trellis; component count says nothing about controllability".to_string()),
        )
    };
    Ok(ComponentsReport {
        components,
        partition,
        controllability_defect: defect,
        reduced_tail_biting,
        equivalence_holds,
        warning,
    })
}
