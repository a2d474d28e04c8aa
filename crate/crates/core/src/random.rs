//! Seeded random instances for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{BlockStructure, BlockedCode};
use crate::constructions::{product_trellis, Span, SpannedGenerator, TrellisKind};
use crate::linalg::{MatrixF, PrimeField};
use crate::realization::{ConstraintNode, Realization, StateVar, SymbolVar, Topology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random vector with entries uniform in GF(p).
pub fn random_vector<R: Rng>(rng: &mut R, field: PrimeField, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.random_range(0..field.modulus())).collect()
}

/// Row span of `rows` uniform random vectors; `rows` is drawn from
/// `0..=total` when not given.
pub fn random_code<R: Rng>(
    rng: &mut R,
    field: PrimeField,
    structure: BlockStructure,
    rows: Option<usize>,
) -> BlockedCode {
    let n = structure.total();
    let k = rows.unwrap_or_else(|| rng.random_range(0..=n));
    let gens: Vec<Vec<u32>> = (0..k).map(|_| random_vector(rng, field, n)).collect();
    BlockedCode::from_generators(field, structure, &gens).expect("shapes agree")
}

/// Random invertible `n x n` matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, field: PrimeField, n: usize) -> MatrixF {
    loop {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| random_vector(rng, field, n)).collect();
        let m = MatrixF::from_rows(field, n, &rows).expect("square");
        if m.rank() == n {
            return m;
        }
    }
}

/// Shape parameters for [`random_realization`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub constraints: usize,
    /// Extra state edges beyond a spanning tree.
    pub extra_edges: usize,
    pub max_symbols_per_constraint: usize,
    pub max_var_dim: usize,
    /// Upper bound on total symbol plus state dimension.
    pub max_total_dim: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            constraints: 3,
            extra_edges: 1,
            max_symbols_per_constraint: 2,
            max_var_dim: 2,
            max_total_dim: 14,
        }
    }
}

/// Random connected topology: a random spanning tree on the constraints,
/// `extra_edges` additional states between distinct constraints, and
/// between 0 and `max_symbols_per_constraint` symbols per constraint. At
/// least one symbol exists overall.
pub fn random_topology<R: Rng>(rng: &mut R, shape: Shape) -> Topology {
    assert!(shape.constraints >= 1 && shape.max_var_dim >= 1);
    let m = shape.constraints;
    let mut budget = shape.max_total_dim;
    let dim = |rng: &mut R, budget: &mut usize, allow_zero: bool| -> usize {
        let lo = usize::from(!allow_zero);
        let hi = shape.max_var_dim.min(*budget);
        if hi < lo {
            return 0;
        }
        let d = rng.random_range(lo..=hi);
        *budget -= d;
        d
    };
    let mut vars: Vec<Vec<String>> = vec![Vec::new(); m];
    let mut states = Vec::new();
    let mut edges: Vec<(usize, usize)> = (1..m).map(|v| (rng.random_range(0..v), v)).collect();
    if m >= 2 {
        for _ in 0..shape.extra_edges {
            let a = rng.random_range(0..m);
            let mut b = rng.random_range(0..m - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
    }
    let mut symbols = Vec::new();
    let first_symbol_at = rng.random_range(0..m);
    for (i, list) in vars.iter_mut().enumerate() {
        let mut count = rng.random_range(0..=shape.max_symbols_per_constraint);
        if i == first_symbol_at {
            count = count.max(1);
        }
        for _ in 0..count {
            let id = format!("a{}", symbols.len());
            let d = dim(rng, &mut budget, false);
            symbols.push(SymbolVar { id: id.clone(), dim: d });
            list.push(id);
        }
    }
    for (j, &(a, b)) in edges.iter().enumerate() {
        let id = format!("s{j}");
        let d = dim(rng, &mut budget, true);
        let mut sv = StateVar::new(id.clone(), d, format!("c{a}"), format!("c{b}"));
        if rng.random_bool(0.5) {
            sv.negate_at = crate::realization::Endpoint::Left;
        }
        states.push(sv);
        vars[a].push(id.clone());
        vars[b].push(id);
    }
    for list in &mut vars {
        list.shuffle(rng);
    }
    Topology {
        symbols,
        states,
        constraints: vars
            .into_iter()
            .enumerate()
            .map(|(i, v)| ConstraintNode::new(format!("c{i}"), v))
            .collect(),
    }
}

/// Random realization on [`random_topology`] with random constraint codes.
pub fn random_realization<R: Rng>(rng: &mut R, field: PrimeField, shape: Shape) -> Realization {
    let topology = random_topology(rng, shape);
    let codes = topology
        .constraints
        .iter()
        .map(|node| random_code(rng, field, topology.constraint_structure(node), None))
        .collect();
    Realization::new(field, topology, codes).expect("random topology is valid")
}

/// Random cycle-free realization.
pub fn random_tree_realization<R: Rng>(rng: &mut R, field: PrimeField, shape: Shape) -> Realization {
    random_realization(rng, field, Shape { extra_edges: 0, ..shape })
}

/// Random tail-biting product trellis on `n` positions with `k` random
/// generators, each with a uniformly random span (degenerate with
/// probability about 1/(n+1)). Entries outside a generator's span are zero
/// and no generator is the zero vector.
pub fn random_product_trellis<R: Rng>(
    rng: &mut R,
    field: PrimeField,
    n: usize,
    k: usize,
) -> (Vec<SpannedGenerator>, Realization) {
    let gens: Vec<SpannedGenerator> = (0..k)
        .map(|_| {
            let span = if rng.random_range(0..=n) == n {
                Span::degenerate()
            } else {
                Span::new(rng.random_range(0..n), rng.random_range(0..n))
            };
            let covered = span.covered_positions(n);
            let mut v = vec![0; n];
            for &pos in &covered {
                v[pos] = rng.random_range(0..field.modulus());
            }
            if v.iter().all(|&x| x == 0) {
                let pos = covered[rng.random_range(0..covered.len())];
                v[pos] = rng.random_range(1..field.modulus());
            }
            SpannedGenerator::new(v, span)
        })
        .collect();
    let r = product_trellis(field, n, &gens, TrellisKind::TailBiting).expect("entries lie inside spans");
    (gens, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let f = PrimeField::new(3).unwrap();
        let a = random_realization(&mut rng(7), f, Shape::default());
        let b = random_realization(&mut rng(7), f, Shape::default());
        assert_eq!(a, b);
    }

    #[test]
    fn respects_dimension_budget() {
        let f = PrimeField::binary();
        let mut g = rng(1);
        for _ in 0..200 {
            let shape = Shape { constraints: 4, extra_edges: 2, max_var_dim: 3, max_total_dim: 10, ..Shape::default() };
            let r = random_realization(&mut g, f, shape);
            assert!(r.symbol_dim() + r.state_dim() <= 10);
            assert!(r.topology().is_connected());
        }
    }

    #[test]
    fn trees_are_cycle_free() {
        let mut g = rng(2);
        for _ in 0..50 {
            let r = random_tree_realization(&mut g, PrimeField::binary(), Shape { constraints: 5, ..Shape::default() });
            assert!(r.topology().is_cycle_free());
        }
    }
}
