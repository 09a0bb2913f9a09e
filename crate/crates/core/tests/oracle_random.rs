use levi_core::oracle::{oracle_check, OracleOp};
use levi_core::random::{random_space, random_subspace, random_vector, rng};
use levi_core::space::Side;

const CUTOFFS: [u64; 3] = [10, 20, 40];

/// All operations on one random instance; returns the failing reports.
fn instance(seed: u64) -> Vec<String> {
    let mut r = rng(seed);
    let space = random_space(&mut r);
    let side = if space.is_selfdual() || seed.is_multiple_of(2) { Side::Left } else { Side::Right };
    let a = random_subspace(&mut r, &space, side);
    let b = random_subspace(&mut r, &space, side);
    let mut samples: Vec<_> = (0..10).map(|_| random_vector(&mut r, &space, side, 10)).collect();
    samples.extend(a.sample_elements(8).into_iter().take(10));
    let ops = [OracleOp::Membership(a.clone(), samples),
        OracleOp::Perp(a.clone()),
        OracleOp::Closure(a.clone()),
        OracleOp::Sum(a.clone(), b.clone()),
        OracleOp::Intersect(a.clone(), b.clone()),
        OracleOp::QuotientDim(a.sum(&b).unwrap(), a.clone()),
        OracleOp::QuotientDim(a.closure(), a.clone())];
    ops.iter()
        .filter_map(|op| {
            let rep = oracle_check(op, &CUTOFFS).unwrap();
            (!rep.passed()).then(|| format!("seed {seed}: {rep}\n  a = {a}\n  b = {b}"))
        })
        .collect()
}

#[test]
fn random_instances_agree_with_oracle() {
    let fails: Vec<String> = (0..50).flat_map(instance).collect();
    assert!(fails.is_empty(), "{} failures:\n{}", fails.len(), fails.iter().take(8).cloned().collect::<Vec<_>>().join("\n"));
}
