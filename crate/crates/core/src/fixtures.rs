//! Small hand-specified realizations used as golden references.

use crate::constructions::{parity_check_realization, product_trellis, Span, SpannedGenerator, TrellisKind};
use crate::linalg::PrimeField;
use crate::realization::{ConstraintNode, Realization, StateVar, SymbolVar, Topology};

fn bits(s: &str) -> Vec<u32> {
    s.chars().map(|c| c.to_digit(10).expect("digit")).collect()
}

fn rows(words: &[&str]) -> Vec<Vec<u32>> {
    words.iter().map(|w| bits(w)).collect()
}

/// Tail-biting cycle `c{i}` on `(s{i}, a{i}, s{i+1 mod n})` with the given
/// symbol and state dimensions.
pub fn tail_biting_topology(symbol_dims: &[usize], state_dims: &[usize]) -> Topology {
    let n = symbol_dims.len();
    assert_eq!(n, state_dims.len());
    Topology {
        symbols: symbol_dims
            .iter()
            .enumerate()
            .map(|(k, &dim)| SymbolVar { id: format!("a{k}"), dim })
            .collect(),
        states: state_dims
            .iter()
            .enumerate()
            .map(|(j, &dim)| StateVar::new(format!("s{j}"), dim, format!("c{}", (j + n - 1) % n), format!("c{j}")))
            .collect(),
        constraints: (0..n)
            .map(|i| ConstraintNode::new(format!("c{i}"), [format!("s{i}"), format!("a{i}"), format!("s{}", (i + 1) % n)]))
            .collect(),
    }
}

/// Binary three-section tail-biting trellis of the even-weight (3,2,2) code
/// with every section code equal to `{000, 110, 101, 011}`. Unobservable:
/// the all-ones state sequence carries the zero codeword.
pub fn even_weight_tail_biting() -> Realization {
    let section = rows(&["110", "011"]);
    Realization::from_generator_rows(
        PrimeField::binary(),
        tail_biting_topology(&[1, 1, 1], &[1, 1, 1]),
        vec![section.clone(), section.clone(), section],
    )
    .expect("fixture is valid")
}

/// The five dependent checks of the self-dual (8,4,4) Reed-Muller code.
pub fn reed_muller_checks() -> Vec<Vec<u32>> {
    rows(&["11110000", "00111100", "00001111", "11000011", "01011010"])
}

/// Parity-check realization on [`reed_muller_checks`]: observable but not
/// controllable.
pub fn reed_muller_parity_realization() -> Realization {
    parity_check_realization(PrimeField::binary(), 8, &reed_muller_checks()).expect("fixture is valid")
}

/// Unobservable five-section binary tail-biting trellis of the (5,3) code
/// `<01110, 10010, 01101>`, state dimensions (2,1,1,2,2). Section codes are
/// given branch by branch as `(s_i, a_i, s_{i+1})` generators.
pub fn unobservable_5_3_tail_biting() -> Realization {
    let sections = vec![
        // 00-0->0, 01-1->0, 10-0->1, 11-1->1
        rows(&["0110", "1001"]),
        // a = s + s'
        rows(&["110", "011"]),
        // s' = (s, a)
        rows(&["1010", "0101"]),
        // 00-1->01, 10-0->10, 01-1->10
        rows(&["00101", "10010", "01110"]),
        // s' = s + (0, a)
        rows(&["10010", "01001", "00101"]),
    ];
    Realization::from_generator_rows(
        PrimeField::binary(),
        tail_biting_topology(&[1; 5], &[2, 1, 1, 2, 2]),
        sections,
    )
    .expect("fixture is valid")
}

/// Product tail-biting trellis of the (5,2) code `<10111, 01100>` with the
/// second generator's span degenerate.
pub fn degenerate_5_2_product() -> Realization {
    product_trellis(
        PrimeField::binary(),
        5,
        &[
            SpannedGenerator::new(bits("10111"), Span::new(2, 0)),
            SpannedGenerator::new(bits("01100"), Span::degenerate()),
        ],
        TrellisKind::TailBiting,
    )
    .expect("fixture is valid")
}

/// Conventional trellis of `<110, 011>` built from the non-minimal spans
/// `0:2` and `1:2`; the middle state has dimension 2.
pub fn nonminimal_322_conventional() -> Realization {
    product_trellis(
        PrimeField::binary(),
        3,
        &[
            SpannedGenerator::new(bits("110"), Span::new(0, 2)),
            SpannedGenerator::new(bits("011"), Span::new(1, 2)),
        ],
        TrellisKind::Conventional,
    )
    .expect("fixture is valid")
}

/// Two equality constraints `x = s` and `s = y` joined by one state.
pub fn equality_chain(field: PrimeField) -> Realization {
    let t = Topology {
        symbols: vec![SymbolVar { id: "x".into(), dim: 1 }, SymbolVar { id: "y".into(), dim: 1 }],
        states: vec![StateVar::new("s", 1, "c0", "c1")],
        constraints: vec![ConstraintNode::new("c0", ["x", "s"]), ConstraintNode::new("c1", ["s", "y"])],
    };
    Realization::from_generator_rows(field, t, vec![vec![vec![1, 1]], vec![vec![1, 1]]]).expect("fixture is valid")
}

/// Chain `c0 = {(a0, s) : a0 = s}` and `c1 = {0}` on `(s, a1)`.
pub fn zero_constraint_chain() -> Realization {
    let t = Topology {
        symbols: vec![SymbolVar { id: "a0".into(), dim: 1 }, SymbolVar { id: "a1".into(), dim: 1 }],
        states: vec![StateVar::new("s", 1, "c0", "c1")],
        constraints: vec![ConstraintNode::new("c0", ["a0", "s"]), ConstraintNode::new("c1", ["s", "a1"])],
    };
    Realization::from_generator_rows(PrimeField::binary(), t, vec![vec![vec![1, 1]], vec![]]).expect("fixture is valid")
}
