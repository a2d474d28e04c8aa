//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use rand::seq::SliceRandom;
use rand::Rng;

use ncl::code::{parse_word, BlockStructure};
use ncl::constructions::{
    generator_realization, parity_check_realization, product_trellis, trajectory_components, Span, SpannedGenerator,
    TrellisKind,
};
use ncl::fixtures;
use ncl::linalg::PrimeField;
use ncl::oracle::{brute_behavior, join_behavior, span_set, EnumerationBudget};
use ncl::random::{self, Shape};
use ncl::reduction::{
    cut_dims, dual_merge_unobservable, merge_state, minimize_cycle_free, minimize_cycle_free_with_order,
    reduce_unobservable, trim_state,
};
use ncl::Realization;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gf(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

fn word_set(f: PrimeField, words: &[&str]) -> HashSet<Vec<u32>> {
    let rows: Vec<Vec<u32>> = words.iter().map(|w| parse_word(f, w).unwrap()).collect();
    span_set(f, rows[0].len(), &rows, u64::MAX).unwrap()
}

/// Symbol parts of the join-enumerated behavior.
fn oracle_code(r: &Realization) -> HashSet<Vec<u32>> {
    let n = r.symbol_dim();
    join_behavior(r, budget())
        .unwrap()
        .into_iter()
        .map(|w| w[..n].to_vec())
        .collect()
}

/// `log_p |B|` from the join-enumerated behavior.
fn oracle_behavior_dim(r: &Realization) -> usize {
    log_p(r.field(), join_behavior(r, budget()).unwrap().len())
}

fn log_p(f: PrimeField, mut size: usize) -> usize {
    let p = f.modulus() as usize;
    let mut k = 0;
    while size > 1 {
        assert_eq!(size % p, 0, "set size is a power of p");
        size /= p;
        k += 1;
    }
    k
}

/// Every word of length `n` orthogonal to all of `words`.
fn brute_dual(f: PrimeField, n: usize, words: &HashSet<Vec<u32>>) -> HashSet<Vec<u32>> {
    let p = f.modulus();
    let mut out = HashSet::new();
    let mut x = vec![0u32; n];
    loop {
        if words
            .iter()
            .all(|w| w.iter().zip(&x).map(|(a, b)| a * b).sum::<u32>() % p == 0)
        {
            out.insert(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn golden() -> Vec<(&'static str, Realization)> {
    vec![
        ("even-weight", fixtures::even_weight_tail_biting()),
        ("even-weight-dual", fixtures::even_weight_tail_biting().dualize()),
        ("reed-muller", fixtures::reed_muller_parity_realization()),
        ("tail-biting-5-3", fixtures::unobservable_5_3_tail_biting()),
        ("tail-biting-5-3-dual", fixtures::unobservable_5_3_tail_biting().dualize()),
        ("tail-biting-5-3-product", fixtures::degenerate_5_2_product()),
        ("nonminimal-trellis", fixtures::nonminimal_322_conventional()),
        ("zero-constraint-chain", fixtures::zero_constraint_chain()),
        ("equality-chain-gf3", fixtures::equality_chain(gf(3))),
    ]
}

/// Random realizations: `count_gf2` over GF(2) with total dim <= 14 and
/// `count_gf3` over GF(3) with total dim <= 10.
fn random_realizations(seed: u64, count_gf2: usize, count_gf3: usize) -> Vec<Realization> {
    let mut rng = random::rng(seed);
    let mut out = Vec::new();
    for i in 0..count_gf2 + count_gf3 {
        let (f, max_total_dim) = if i < count_gf2 { (gf(2), 14) } else { (gf(3), 10) };
        let shape = Shape {
            constraints: rng.random_range(1..=5),
            extra_edges: rng.random_range(0..=2),
            max_symbols_per_constraint: 2,
            max_var_dim: 3,
            max_total_dim,
        };
        out.push(random::random_realization(&mut rng, f, shape));
    }
    out
}

fn criterion_1() -> Outcome {
    let f = gf(2);
    let r = fixtures::even_weight_tail_biting();
    ensure!(oracle_code(&r) == word_set(f, &["110", "011"]), "primal code");
    ensure!(r.behavior().dim() == 3, "dim B = {}", r.behavior().dim());
    ensure!(r.unobservable_behavior().dim() == 1, "dim B_u");
    let zero_trajectories = brute_behavior(&r, budget())
        .unwrap()
        .iter()
        .filter(|w| w[..3].iter().all(|&x| x == 0))
        .count();
    ensure!(zero_trajectories == 2, "zero word realized by {zero_trajectories} trajectories");
    ensure!(r.controllability_defect() == 0, "primal defect");

    let d = r.dualize();
    ensure!(oracle_code(&d) == word_set(f, &["111"]), "dual code");
    ensure!(d.behavior().dim() == 1, "dim B dual");
    ensure!(d.constraint_dim_sum() == 3, "sum dim C dual");
    ensure!(d.state_dim() == 3, "dim S dual");
    ensure!(d.controllability_defect() == 1, "dual defect");
    let comps = trajectory_components(&d, budget()).unwrap().components;
    ensure!(comps == 2, "dual components {comps}");
    Ok("primal (3,2) dim B 3, B_u 1, defect 0; dual (3,1) dim B 1, defect 1, 2 components".into())
}

fn criterion_2() -> Outcome {
    let f = gf(2);
    let checks = fixtures::reed_muller_checks();
    let r = parity_check_realization(f, 8, &checks).unwrap();
    ensure!(r.state_dim() == 20, "dim S = {}", r.state_dim());
    ensure!(r.constraint_dim_sum() == 23, "sum dim C = {}", r.constraint_dim_sum());
    let rm = word_set(f, &["11110000", "00111100", "00001111", "01010101"]);
    ensure!(oracle_code(&r) == rm, "realized code is not RM(8,4,4)");
    let code = r.realized_code();
    ensure!(code.dual() == code, "code is not self-dual");
    ensure!(code.min_distance(1 << 10).unwrap() == Some(4), "min weight");
    ensure!(r.is_observable(), "observable");
    ensure!(r.controllability_defect() == 1, "defect {}", r.controllability_defect());
    let comps = trajectory_components(&r, budget()).unwrap().components;
    ensure!(comps == 1, "trajectory graph has {comps} components");
    Ok("dim S 20, sum dim C 23, self-dual (8,4,4), observable, defect 1, connected".into())
}

fn criterion_3() -> Outcome {
    let f = gf(2);
    let r = fixtures::unobservable_5_3_tail_biting();
    ensure!(oracle_code(&r) == word_set(f, &["01110", "10010", "01101"]), "primal code");
    ensure!(r.state_dims() == vec![2, 1, 1, 2, 2], "primal state dims");
    ensure!(r.unobservable_behavior().dim() == 1, "dim B_u");
    let d = r.dualize();
    ensure!(oracle_code(&d) == word_set(f, &["10111", "01100"]), "dual code");
    let p = product_trellis(
        f,
        5,
        &[
            SpannedGenerator::new(parse_word(f, "10111").unwrap(), Span::new(2, 0)),
            SpannedGenerator::new(parse_word(f, "01100").unwrap(), Span::degenerate()),
        ],
        TrellisKind::TailBiting,
    )
    .unwrap();
    ensure!(p.state_dims() == d.state_dims(), "product dims {:?}", p.state_dims());
    let comps = trajectory_components(&d, budget()).unwrap().components;
    ensure!(comps == 2, "dual components {comps}");
    Ok("(5,3) primal, dims (2,1,1,2,2), B_u 1; (5,2) dual; product dims match; 2 components".into())
}

fn criterion_4() -> Outcome {
    let mut rng = random::rng(4);
    let mut checked = 0;
    let mut blocks_checked = 0;
    for i in 0..240 {
        let f = if i % 2 == 0 { gf(2) } else { gf(3) };
        let nblocks = rng.random_range(1..=4);
        let pairs: Vec<(String, usize)> = (0..nblocks).map(|b| (format!("b{b}"), rng.random_range(1..=3))).collect();
        let structure = BlockStructure::from_pairs(&pairs).unwrap();
        let c = random::random_code(&mut rng, f, structure, None);
        let d = c.dual();
        for (id, _) in &pairs {
            let trim = c.project(&[id]).unwrap().space().is_full();
            let dual_proper = d.cross_section(&[id]).unwrap().dim() == 0;
            ensure!(trim == dual_proper, "code {i} block {id}: trim {trim}, dual proper {dual_proper}");
            blocks_checked += 1;
        }
        checked += 1;
    }
    Ok(format!("{checked} codes, {blocks_checked} blocks, 0 failures"))
}

fn criterion_5() -> Outcome {
    let mut instances = golden();
    for (i, r) in random_realizations(5, 80, 30).into_iter().enumerate() {
        instances.push((if i < 80 { "random-gf2" } else { "random-gf3" }, r));
    }
    let mut reductions = 0;
    let mut unobs_steps = 0;
    for (name, r) in &instances {
        let reference = oracle_code(r);
        let mut candidates = Vec::new();
        for node in &r.topology().constraints {
            for s in r.topology().states_of(node) {
                if let Ok((out, _)) = trim_state(r, s, &node.id) {
                    candidates.push(out);
                }
                if let Ok((out, _)) = merge_state(r, s, &node.id) {
                    candidates.push(out);
                }
            }
        }
        if let Ok((out, _)) = dual_merge_unobservable(r) {
            candidates.push(out);
        }
        let mut cur = r.clone();
        while !cur.is_observable() {
            let before = cur.unobservable_behavior().dim();
            let (next, _) = reduce_unobservable(&cur).unwrap();
            let after = next.unobservable_behavior().dim();
            ensure!(after + 1 == before, "{name}: B_u went {before} -> {after}");
            unobs_steps += 1;
            candidates.push(next.clone());
            cur = next;
        }
        for out in candidates {
            ensure!(oracle_code(&out) == reference, "{name}: reduction changed the realized code");
            reductions += 1;
        }
    }
    Ok(format!(
        "{} instances, {reductions} reductions preserved the code, {unobs_steps} unobservability steps each -1",
        instances.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = random::rng(6);
    let mut count = 0;
    while count < 60 {
        let shape = Shape {
            constraints: rng.random_range(2..=6),
            extra_edges: 0,
            max_symbols_per_constraint: 2,
            max_var_dim: 3,
            max_total_dim: 16,
        };
        let r = random::random_tree_realization(&mut rng, gf(2), shape);
        let (min, _) = minimize_cycle_free(&r).unwrap();
        for node in &min.topology().constraints {
            ensure!(min.is_proper(&node.id).unwrap(), "tree {count}: {} not proper", node.id);
            for s in min.topology().states_of(node) {
                ensure!(min.is_trim(&node.id, s).unwrap(), "tree {count}: {} not trim at {s}", node.id);
            }
        }
        let cuts = cut_dims(&r.realized_code(), r.topology()).map_err(|e| e.to_string())?;
        for (cut, dim) in cuts.iter().zip(min.state_dims()) {
            let past = cut.past_projection - cut.past_cross_section;
            let future = cut.future_projection - cut.future_cross_section;
            ensure!(past == dim && future == dim, "tree {count}: {} has dim {dim}, cut gives {past}/{future}", cut.state);
        }
        let mut order: Vec<usize> = (0..r.topology().constraints.len()).collect();
        order.shuffle(&mut rng);
        let (other, _) = minimize_cycle_free_with_order(&r, &order).unwrap();
        ensure!(other.state_dims() == min.state_dims(), "tree {count}: order {order:?} changed dims");
        count += 1;
    }
    Ok(format!("{count} trees minimal at every cut, order-invariant"))
}

fn criterion_7() -> Outcome {
    let mut instances: Vec<Realization> = golden().into_iter().map(|(_, r)| r).collect();
    instances.extend(random_realizations(7, 80, 40));
    let mut controllable = 0;
    for (i, r) in instances.iter().enumerate() {
        let c = r.is_controllable();
        ensure!(c == r.dualize().is_observable(), "instance {i}: controllable {c} but dual observability differs");
        let dim_b = oracle_behavior_dim(r);
        let independent = dim_b + r.state_dim() == r.constraint_dim_sum();
        ensure!(independent == c, "instance {i}: dim B = sum C - S is {independent}, controllable {c}");
        controllable += usize::from(c);
    }
    Ok(format!("{} instances ({controllable} controllable), 0 failures", instances.len()))
}

fn criterion_8() -> Outcome {
    let mut instances: Vec<Realization> = golden().into_iter().map(|(_, r)| r).collect();
    instances.extend(random_realizations(8, 80, 30));
    let gf3 = instances.iter().filter(|r| r.field().modulus() == 3).count();
    ensure!(gf3 >= 20, "only {gf3} GF(3) instances");
    for (i, r) in instances.iter().enumerate() {
        let primal = oracle_code(r);
        let dual = oracle_code(&r.dualize());
        ensure!(dual == brute_dual(r.field(), r.symbol_dim(), &primal), "instance {i}: dual code mismatch");
        ensure!(r.dualize().realized_code() == r.realized_code().dual(), "instance {i}: library mismatch");
    }
    Ok(format!("{} instances ({gf3} over GF(3)), 0 failures", instances.len()))
}

/// Rows linked when they share a nonzero column; the replica graph is
/// connected exactly when this row graph is.
fn rows_connected(rows: &[Vec<u32>]) -> bool {
    let mut reached = vec![false; rows.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..rows.len() {
            let shared = rows[i].iter().zip(&rows[j]).any(|(&a, &b)| a != 0 && b != 0);
            if !reached[j] && shared {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Random rows without zero rows or columns whose replica graph is connected.
fn random_rows(rng: &mut impl Rng, f: PrimeField) -> (usize, Vec<Vec<u32>>) {
    loop {
        let n = rng.random_range(2..=6);
        let k = rng.random_range(1..=4);
        let rows: Vec<Vec<u32>> = (0..k).map(|_| random::random_vector(rng, f, n)).collect();
        let zero_row = rows.iter().any(|r| r.iter().all(|&x| x == 0));
        let zero_col = (0..n).any(|j| rows.iter().all(|r| r[j] == 0));
        if !zero_row && !zero_col && rows_connected(&rows) {
            return (n, rows);
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = random::rng(9);
    let mut dependent = 0;
    let total = 80;
    for i in 0..total {
        let f = if i % 2 == 0 { gf(2) } else { gf(3) };
        let (n, rows) = random_rows(&mut rng, f);
        let independent =
            span_set(f, n, &rows, u64::MAX).unwrap().len() == (f.modulus() as usize).pow(rows.len() as u32);
        dependent += usize::from(!independent);
        let g = generator_realization(f, n, &rows).unwrap();
        ensure!(g.is_controllable(), "set {i}: generator realization uncontrollable");
        ensure!(g.is_observable() == independent, "set {i}: generator observability vs independence");
        let h = parity_check_realization(f, n, &rows).unwrap();
        ensure!(h.is_observable(), "set {i}: parity-check realization unobservable");
        ensure!(h.is_controllable() == independent, "set {i}: parity-check controllability vs independence");
    }
    Ok(format!("{total} row sets ({dependent} dependent), 0 failures"))
}

fn criterion_10() -> Outcome {
    let mut rng = random::rng(10);
    let total = 150;
    let mut uncontrollable = 0;
    for i in 0..total {
        let f = if i % 3 == 2 { gf(3) } else { gf(2) };
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=4);
        let (gens, r) = random::random_product_trellis(&mut rng, f, n, k);
        ensure!(r.is_reduced(), "trellis {i} is not reduced");
        let rep = trajectory_components(&r, budget()).map_err(|e| e.to_string())?;
        let degenerate = gens.iter().any(|g| g.span.degenerate);
        let c = r.is_controllable();
        ensure!(!c == (rep.components > 1), "trellis {i}: controllable {c}, {} components", rep.components);
        ensure!(c == !degenerate, "trellis {i}: controllable {c}, degenerate span {degenerate}");
        uncontrollable += usize::from(!c);
    }
    Ok(format!("{total} trellises ({uncontrollable} uncontrollable), 0 failures"))
}

fn criterion_11() -> Outcome {
    let mut instances: Vec<Realization> = golden().into_iter().map(|(_, r)| r).collect();
    instances.extend(random_realizations(11, 120, 60));
    let cap = EnumerationBudget::new(1 << 20).unwrap();
    let mut compared = 0;
    let mut skipped = 0;
    for (i, r) in instances.iter().enumerate() {
        let scan = match brute_behavior(r, cap) {
            Ok(words) => words,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let b = r.behavior();
        let kernel = b
            .code()
            .enumerate(1 << 20)
            .map_err(|e| format!("instance {i}: {e}"))?;
        let scan_set: HashSet<Vec<u32>> = scan.into_iter().collect();
        let kernel_set: HashSet<Vec<u32>> = kernel.into_iter().collect();
        ensure!(scan_set == kernel_set, "instance {i}: behavior sets differ");
        compared += 1;
    }
    ensure!(compared >= 100, "only {compared} instances within 2^20");
    Ok(format!("{compared} instances equal as sets ({skipped} above 2^20 skipped)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("even-weight tail-biting suite", criterion_1),
        ("Reed-Muller parity-check suite", criterion_2),
        ("unobservable (5,3) tail-biting suite", criterion_3),
        ("trim/proper duality of constraint codes", criterion_4),
        ("reductions preserve the realized code", criterion_5),
        ("cycle-free minimization meets the cut bound", criterion_6),
        ("controllable iff dual observable", criterion_7),
        ("dual realization realizes the dual code", criterion_8),
        ("generator and parity-check realizations", criterion_9),
        ("tail-biting components vs controllability", criterion_10),
        ("oracle equivalence", criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
