//! Acceptance suite: one PASS/FAIL line per criterion, each within its time limit.
//!
//! Runs without the libtest harness so every line prints even when earlier ones fail.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use levi_cli::commands::oracle_ops;
use levi_cli::model::{load_model, Model};
use levi_core::enumerate::{count_bound, count_self_normalizing, enumerate_all, enumerate_couples, finiteness_test, trace_condition_count, Count};
use levi_core::laws::{de_morgan, galois, triple_perp};
use levi_core::levi::{forced_selfdual_flags, is_levi_component, is_levi_so, is_levi_sp};
use levi_core::oracle::{oracle_check, OracleOp};
use levi_core::random::{random_levi_retry, random_space, random_subspace, random_vector, rng};
use levi_core::space::Side;
use levi_core::subspace::{QuotientDim, Subspace};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Outcome);

const CUTOFFS: [u64; 3] = [10, 20, 40];

fn model(file: &str) -> Result<Model, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(file);
    let m = load_model(&path).map_err(|e| e.to_string())?;
    if !m.diagnostics.is_empty() {
        return Err(format!("{file}: {}", m.diagnostics.join("; ")));
    }
    Ok(m)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn two_couple() -> Outcome {
    let m = model("two_couple.model")?;
    let all = enumerate_all(m.levi("L").map_err(e)?).map_err(e)?;
    check(all.total == Count::Finite(2), || format!("total {}", all.total))?;
    let found: Vec<_> = all.couples.iter().map(|c| &c.couple).collect();
    for name in ["C1", "C2"] {
        let c = m.couple(name).map_err(e)?;
        check(found.contains(&c), || format!("{name} not enumerated"))?;
    }
    check(found.len() == 2, || format!("{} couples", found.len()))?;
    Ok("2 couples equal to C1 and C2".into())
}

fn three_parabolic() -> Outcome {
    let m = model("three_parabolic.model")?;
    let l = m.levi("L").map_err(e)?;
    let count = count_self_normalizing(l).map_err(e)?.count;
    check(count == Count::Finite(3), || format!("count {count}"))?;
    let fin = finiteness_test(l).map_err(e)?;
    let dims: Vec<QuotientDim> = [vec![], vec![2], vec![1], vec![1, 2]]
        .iter()
        .map(|j| fin.quotients.iter().find(|q| &q.subset == j).map(|q| q.dim).ok_or_else(|| format!("no quotient for {j:?}")))
        .collect::<Result<_, _>>()?;
    let want = [1, 1, 0, 1].map(QuotientDim::Finite);
    check(dims == want, || format!("quotients {dims:?}"))?;
    for (order, names) in [(vec![1, 2], vec!["C1"]), (vec![2, 1], vec!["C2", "C3"])] {
        let r = enumerate_couples(l, &order).map_err(e)?;
        let found: Vec<_> = r.couples.iter().map(|c| &c.couple).collect();
        check(found.len() == names.len(), || format!("order {order:?}: {} couples", found.len()))?;
        for name in names {
            let c = m.couple(name).map_err(e)?;
            check(found.contains(&c), || format!("{name} missing for order {order:?}"))?;
        }
    }
    Ok("finite 3, quotients 1 1 0 1, couples C1 | C2 C3".into())
}

fn one_block() -> Outcome {
    let m = model("one_block.model")?;
    let x = m.subspace("X").map_err(e)?;
    let y = m.subspace("Y").map_err(e)?;
    check(x.perp() == Subspace::zero(&m.space, Side::Right), || format!("X^perp = {}", x.perp()))?;
    let v1 = m.eval(Side::Left, "span{V[1]}").map_err(e)?;
    check(y.perp() == v1, || format!("Y^perp = {}", y.perp()))?;
    let count = count_self_normalizing(m.levi("L").map_err(e)?).map_err(e)?.count;
    check(count == Count::Finite(1), || format!("count {count}"))?;
    let trace = trace_condition_count(m.couple("C").map_err(e)?).map_err(e)?;
    check(trace == Count::Finite(2), || format!("trace count {trace}"))?;
    Ok("X^perp = 0, Y^perp = span{V[1]}, count 1, trace count 2".into())
}

fn eight_five() -> Outcome {
    let m = model("eight_five.model")?;
    let l = m.levi("L").map_err(e)?;
    let count = count_self_normalizing(l).map_err(e)?.count;
    check(count == Count::Finite(960), || format!("count {count}"))?;
    let r = enumerate_couples(l, m.order("I").map_err(e)?).map_err(e)?;
    check(r.couples.len() == 8, || format!("{} couples for the identity order", r.couples.len()))?;
    let options: [&[&str]; 5] = [&["U1a", "U1b"], &["U2"], &["U3a", "U3b"], &["U4"], &["U5a", "U5b"]];
    let mut picks = Vec::new();
    for c in &r.couples {
        let mut pick = Vec::new();
        for (i, u) in c.us.iter().enumerate() {
            let k = options[i]
                .iter()
                .position(|name| m.subspace(name).is_ok_and(|s| s == u))
                .ok_or_else(|| format!("U{} = {u} is not among {:?}", i + 1, options[i]))?;
            pick.push(k);
        }
        picks.push(pick);
    }
    picks.sort();
    picks.dedup();
    check(picks.len() == 8, || format!("only {} distinct U tuples", picks.len()))?;
    Ok("finite 960, 8 identity-order couples over the listed U options".into())
}

fn selfdual() -> Outcome {
    for (file, so) in [("selfdual_so.model", true), ("selfdual_sp.model", false)] {
        let m = model(file)?;
        let l = m.levi("L").map_err(e)?;
        let f = m.flag("F").map_err(e)?;
        let flags = forced_selfdual_flags(l).map_err(e)?;
        check(flags.len() == 1 && &flags[0] == f, || format!("{file}: {} forced flags", flags.len()))?;
        let meet = m.subspace("WPP").map_err(e)?.intersect(m.subspace("WP").map_err(e)?).map_err(e)?;
        check(&meet == m.subspace("E").map_err(e)?, || format!("{file}: closure meets perp in {meet}"))?;
        let cert = if so { is_levi_so(f, l) } else { is_levi_sp(f, l) }.map_err(e)?;
        check(cert.holds, || format!("{file}: {}", cert.reason.unwrap_or_default()))?;
    }
    Ok("one forced flag each, closure meets perp in span{V[1]}".into())
}

fn negative() -> Outcome {
    let m = model("negative.model")?;
    let cert = is_levi_component(m.couple("C").map_err(e)?, m.levi("L").map_err(e)?).map_err(e)?;
    check(!cert.holds, || "accepted as a Levi component".into())?;
    Ok(format!("rejected: {}", cert.reason.unwrap_or_default()))
}

fn laws() -> Outcome {
    let mut fails = Vec::new();
    for seed in 0..1000 {
        for law in [galois, de_morgan, triple_perp] {
            if let Err(msg) = law(seed) {
                fails.push(format!("seed {seed}: {msg}"));
            }
        }
    }
    check(fails.is_empty(), || format!("{} failures, first: {}", fails.len(), fails[0]))?;
    Ok("3000 instances".into())
}

fn bound() -> Outcome {
    let mut r = rng(2024);
    let (mut finite, mut draws) = (0, 0);
    while finite < 50 {
        draws += 1;
        check(draws <= 400, || format!("only {finite} finite data in 400 draws"))?;
        let n = 1 + draws % 3;
        let Some((_, l)) = random_levi_retry(&mut r, n, 20) else { continue };
        let Count::Finite(m) = count_self_normalizing(&l).map_err(e)?.count else { continue };
        check(m <= count_bound(n), || format!("n = {n}: count {m} over the bound {}", count_bound(n)))?;
        let all = enumerate_all(&l).map_err(e)?;
        check(all.total == Count::Finite(m), || format!("enumeration total {} against count {m}", all.total))?;
        for (i, a) in all.couples.iter().enumerate() {
            let shared = all.couples[i + 1..].iter().any(|b| b.couple.flag_v == a.couple.flag_v);
            check(!shared, || format!("two couples share flagV for {l:?}"))?;
        }
        finite += 1;
    }
    Ok(format!("50 finite data in {draws} draws"))
}

fn random_ops(seed: u64) -> Vec<(String, OracleOp)> {
    let mut r = rng(seed);
    let space = random_space(&mut r);
    let side = if space.is_selfdual() || seed.is_multiple_of(2) { Side::Left } else { Side::Right };
    let a = random_subspace(&mut r, &space, side);
    let b = random_subspace(&mut r, &space, side);
    let mut samples: Vec<_> = (0..10).map(|_| random_vector(&mut r, &space, side, 10)).collect();
    samples.extend(a.sample_elements(8).into_iter().take(10));
    let tag = format!("seed {seed}");
    let mut ops = vec![
        OracleOp::Membership(a.clone(), samples),
        OracleOp::Perp(a.clone()),
        OracleOp::Closure(a.clone()),
        OracleOp::Sum(a.clone(), b.clone()),
        OracleOp::Intersect(a.clone(), b.clone()),
        OracleOp::QuotientDim(a.closure(), a.clone()),
    ];
    if let Ok(s) = a.sum(&b) {
        ops.push(OracleOp::QuotientDim(s, a));
    }
    ops.into_iter().map(|op| (tag.clone(), op)).collect()
}

fn oracle() -> Outcome {
    let mut ops: Vec<(String, OracleOp)> = (0..200).flat_map(random_ops).collect();
    for file in ["two_couple", "three_parabolic", "one_block", "eight_five", "negative", "selfdual_so", "selfdual_sp"] {
        let m = model(&format!("{file}.model"))?;
        let named = oracle_ops(&m, "all", 0).map_err(e)?;
        ops.extend(named.into_iter().map(|(tag, op)| (format!("{file} {tag}"), op)));
    }
    let mut fails = Vec::new();
    for (tag, op) in &ops {
        let rep = oracle_check(op, &CUTOFFS).map_err(e)?;
        if !rep.passed() {
            fails.push(format!("{tag}: {rep}"));
        }
    }
    check(fails.is_empty(), || format!("{} of {} checks fail, first: {}", fails.len(), ops.len(), fails[0]))?;
    Ok(format!("{} checks agree and stabilize", ops.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("two-couple enumeration", 1, two_couple),
        ("three-parabolic count and couples", 2, three_parabolic),
        ("one-block perps and counts", 1, one_block),
        ("eight-five count and identity order", 30, eight_five),
        ("so/sp forced flag", 2, selfdual),
        ("negative Levi check", 1, negative),
        ("perp laws", 60, laws),
        ("count bound and one-sidedness", 120, bound),
        ("oracle equivalence", 120, oracle),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if took <= Duration::from_secs(limit) => format!("PASS {}. {name}: {detail}", k + 1),
            Ok(detail) => format!("FAIL {}. {name}: {detail}, but over the {limit} s limit", k + 1),
            Err(why) => format!("FAIL {}. {name}: {why}", k + 1),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict} [{:.2} s]", took.as_secs_f64());
    }
    println!("{} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
