//! Brute-force reference computations.
//!
//! Nothing here goes through the subspace machinery: local codes are
//! expanded into explicit codeword sets by summing every combination of their
//! generator rows, and the behavior is found by testing every global
//! assignment against every local set. Only [`PrimeField`] is shared with the
//! main path.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::code::{odometer_step, BlockedCode};
use crate::linalg::PrimeField;
use crate::realization::Realization;

pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "NCL_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {points} points, budget is {budget}")]
    BudgetExceeded { points: u128, budget: u64 },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("expected code has length {expected}, realization has symbol length {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Cap on `|F|^(dim A + dim S)` for exhaustive scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    max_points: u64,
}

impl EnumerationBudget {
    pub fn new(max_points: u64) -> Result<Self, OracleError> {
        if max_points == 0 {
            return Err(OracleError::ZeroBudget);
        }
        Ok(Self { max_points })
    }

    /// Default budget, overridden by `NCL_BUDGET` when it parses as a
    /// positive integer.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .and_then(|n| Self::new(n).ok())
            .unwrap_or_default()
    }

    pub fn max_points(&self) -> u64 {
        self.max_points
    }

    fn admit(&self, p: u32, n: usize) -> Result<u64, OracleError> {
        let points = u128::from(p).checked_pow(n as u32).unwrap_or(u128::MAX);
        if points > u128::from(self.max_points) {
            return Err(OracleError::BudgetExceeded {
                points,
                budget: self.max_points,
            });
        }
        Ok(points as u64)
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_points: DEFAULT_BUDGET,
        }
    }
}

/// Every linear combination of `rows` (each of length `n`).
pub fn span_set<R: AsRef<[u32]>>(
    field: PrimeField,
    n: usize,
    rows: &[R],
    cap: u64,
) -> Result<HashSet<Vec<u32>>, OracleError> {
    let p = field.modulus();
    EnumerationBudget::new(cap)?.admit(p, rows.len())?;
    let mut coeffs = vec![0u32; rows.len()];
    let mut out = HashSet::new();
    loop {
        let mut w = vec![0u32; n];
        for (row, &c) in rows.iter().zip(&coeffs) {
            for (wi, &gi) in w.iter_mut().zip(row.as_ref()) {
                *wi = (*wi + c * gi) % p;
            }
        }
        out.insert(w);
        if !odometer_step(&mut coeffs, p) {
            break;
        }
    }
    Ok(out)
}

/// Global column indices of each constraint's variables, symbols first then
/// states, recomputed from the topology alone.
fn local_columns(r: &Realization) -> (usize, Vec<Vec<usize>>) {
    let t = r.topology();
    let mut offsets = std::collections::HashMap::new();
    let mut acc = 0;
    for (id, dim) in t
        .symbols
        .iter()
        .map(|s| (&s.id, s.dim))
        .chain(t.states.iter().map(|s| (&s.id, s.dim)))
    {
        offsets.insert(id.as_str(), (acc, dim));
        acc += dim;
    }
    let cols = t
        .constraints
        .iter()
        .map(|c| {
            c.vars
                .iter()
                .flat_map(|v| {
                    let (o, d) = offsets[v.as_str()];
                    o..o + d
                })
                .collect()
        })
        .collect();
    (acc, cols)
}

/// All `(a, s)` satisfying every constraint, in scan order (first global
/// coordinate varying fastest).
pub fn brute_behavior(r: &Realization, budget: EnumerationBudget) -> Result<Vec<Vec<u32>>, OracleError> {
    let f = r.field();
    let p = f.modulus();
    let (n, cols) = local_columns(r);
    budget.admit(p, n)?;
    let local_sets = r
        .codes()
        .iter()
        .map(|c| span_set(f, c.length(), &c.generators().to_rows(), u64::MAX))
        .collect::<Result<Vec<_>, _>>()?;

    let mut x = vec![0u32; n];
    let mut buf = Vec::new();
    let mut out = Vec::new();
    loop {
        let ok = cols.iter().zip(&local_sets).all(|(cs, set)| {
            buf.clear();
            buf.extend(cs.iter().map(|&c| x[c]));
            set.contains(buf.as_slice())
        });
        if ok {
            out.push(x.clone());
        }
        if !odometer_step(&mut x, p) {
            break;
        }
    }
    Ok(out)
}

/// The same set as [`brute_behavior`], found by joining the local codeword
/// sets one constraint at a time (each next constraint sharing a variable
/// with those already joined when possible). Intermediate sets, not the full
/// assignment space, are bounded by the budget, so sparse graphs far beyond
/// the reach of a full scan stay cheap. Sorted in scan order.
pub fn join_behavior(r: &Realization, budget: EnumerationBudget) -> Result<Vec<Vec<u32>>, OracleError> {
    let f = r.field();
    let (n, cols) = local_columns(r);
    let local_sets = r
        .codes()
        .iter()
        .map(|c| {
            span_set(f, c.length(), &c.generators().to_rows(), budget.max_points())
                .map(|set| set.into_iter().collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut assigned = vec![false; n];
    let mut done = vec![false; cols.len()];
    let mut partial: Vec<Vec<u32>> = vec![vec![0; n]];
    for _ in 0..cols.len() {
        let next = (0..cols.len())
            .filter(|&i| !done[i])
            .find(|&i| cols[i].iter().any(|&c| assigned[c]))
            .or_else(|| (0..cols.len()).find(|&i| !done[i]))
            .expect("an unjoined constraint remains");
        done[next] = true;
        let mut grown = Vec::new();
        for x in &partial {
            for w in &local_sets[next] {
                let fits = cols[next].iter().zip(w).all(|(&c, &v)| !assigned[c] || x[c] == v);
                if fits {
                    let mut y = x.clone();
                    for (&c, &v) in cols[next].iter().zip(w) {
                        y[c] = v;
                    }
                    grown.push(y);
                }
            }
            if grown.len() as u64 > budget.max_points() {
                return Err(OracleError::BudgetExceeded {
                    points: grown.len() as u128,
                    budget: budget.max_points(),
                });
            }
        }
        for &c in &cols[next] {
            assigned[c] = true;
        }
        partial = grown;
    }
    // coordinates in no constraint cannot occur in a validated realization
    debug_assert!(assigned.iter().all(|&a| a) || n == 0);
    partial.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    partial.dedup();
    Ok(partial)
}

/// Distinct symbol parts of the brute-force behavior, in symbol-space scan
/// order (first symbol coordinate varying fastest).
pub fn brute_realized(r: &Realization, budget: EnumerationBudget) -> Result<Vec<Vec<u32>>, OracleError> {
    let n_sym = r.symbol_dim();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in brute_behavior(r, budget)? {
        let a = w[..n_sym].to_vec();
        if seen.insert(a.clone()) {
            out.push(a);
        }
    }
    out.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discrepancy {
    /// Realized by the realization but missing from the expected code.
    RealizedNotExpected,
    /// In the expected code but not realized.
    ExpectedNotRealized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Vec<u32>,
    pub side: Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub counterexample: Option<Counterexample>,
}

/// Compares the brute-force realized code with the words of `expected`.
pub fn check_realizes(
    r: &Realization,
    expected: &BlockedCode,
    budget: EnumerationBudget,
) -> Result<Verdict, OracleError> {
    if expected.length() != r.symbol_dim() {
        return Err(OracleError::LengthMismatch {
            expected: expected.length(),
            found: r.symbol_dim(),
        });
    }
    let realized = brute_realized(r, budget)?;
    let mut expected_words = expected.enumerate(budget.max_points()).map_err(|_| OracleError::BudgetExceeded {
        points: u128::from(r.field().order()).pow(expected.dim() as u32),
        budget: budget.max_points(),
    })?;
    expected_words.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    let expected_set: HashSet<&Vec<u32>> = expected_words.iter().collect();
    let realized_set: HashSet<&Vec<u32>> = realized.iter().collect();
    let counterexample = realized
        .iter()
        .find(|w| !expected_set.contains(w))
        .map(|w| Counterexample {
            word: w.clone(),
            side: Discrepancy::RealizedNotExpected,
        })
        .or_else(|| {
            expected_words
                .iter()
                .find(|w| !realized_set.contains(w))
                .map(|w| Counterexample {
                    word: w.clone(),
                    side: Discrepancy::ExpectedNotRealized,
                })
        });
    Ok(Verdict {
        ok: counterexample.is_none(),
        counterexample,
    })
}

/// True when the kernel-computed behavior and the brute-force behavior are
/// the same set.
pub fn behavior_matches(r: &Realization, budget: EnumerationBudget) -> Result<bool, OracleError> {
    let brute: HashSet<Vec<u32>> = brute_behavior(r, budget)?.into_iter().collect();
    let b = r.behavior();
    if brute.len() as u128 != u128::from(r.field().order()).pow(b.dim() as u32) {
        return Ok(false);
    }
    for row in b.code().generators().row_iter() {
        if !brute.contains(row) {
            return Ok(false);
        }
    }
    Ok(true)
}
