//! Algebraic laws of the perp calculus, checked on one seeded random instance each.
//!
//! Each check returns `Err(description)` naming the violated law and the operands.

use rand::Rng;

use crate::pattern::IndexPattern;
use crate::random::{random_space, random_subspace, random_vector, rng, Rand};
use crate::space::{Side, Vector};
use crate::subspace::{Space, Subspace, TailFamily};

pub type LawResult = std::result::Result<(), String>;

fn ensure(ok: bool, law: &str, operands: &[&Subspace]) -> LawResult {
    if ok {
        return Ok(());
    }
    let ops: Vec<String> = operands.iter().map(|s| s.to_string()).collect();
    Err(format!("{law} fails for {}", ops.join(" ; ")))
}

fn side_for(space: &Space, r: &mut Rand) -> Side {
    if space.is_selfdual() || r.gen_bool(0.5) {
        Side::Left
    } else {
        Side::Right
    }
}

fn err(e: crate::error::Error) -> String {
    e.to_string()
}

/// `A ⊆ A^⊥⊥`, `A^⊥⊥⊥ = A^⊥`, and `A ⊆ B ⇒ B^⊥ ⊆ A^⊥` for `B = A + C`.
pub fn galois(seed: u64) -> LawResult {
    let mut r = rng(seed);
    let space = random_space(&mut r);
    let side = side_for(&space, &mut r);
    let a = random_subspace(&mut r, &space, side);
    let c = random_subspace(&mut r, &space, side);
    let b = a.sum(&c).map_err(err)?;
    ensure(a.closure().includes(&a).map_err(err)?, "A ⊆ A^⊥⊥", &[&a])?;
    ensure(a.perp().closure() == a.perp(), "A^⊥⊥⊥ = A^⊥", &[&a])?;
    ensure(a.perp().includes(&b.perp()).map_err(err)?, "A ⊆ B ⇒ B^⊥ ⊆ A^⊥", &[&a, &b])?;
    ensure(a.closure().closure() == a.closure(), "closure is idempotent", &[&a])
}

/// `(A + B)^⊥ = A^⊥ ∩ B^⊥`.
pub fn de_morgan(seed: u64) -> LawResult {
    let mut r = rng(seed);
    let space = random_space(&mut r);
    let side = side_for(&space, &mut r);
    let a = random_subspace(&mut r, &space, side);
    let b = random_subspace(&mut r, &space, side);
    let lhs = a.sum(&b).map_err(err)?.perp();
    let rhs = a.perp().intersect(&b.perp()).map_err(err)?;
    ensure(lhs == rhs, "(A + B)^⊥ = A^⊥ ∩ B^⊥", &[&a, &b])
}

/// Nondegenerately paired `X`, `Y`: shifted coordinate families over a common index set,
/// falling back to plain coordinate subspaces when the shifts spoil nondegeneracy.
fn paired(r: &mut Rand, space: &Space) -> std::result::Result<(Subspace, Subspace), String> {
    let u = space.universe().clone();
    let m = r.gen_range(1..=3u64);
    let res = r.gen_range(0..m as i64);
    let t = r.gen_range(2..=4i64);
    let pos = IndexPattern::residues(&u, m, &[res])
        .and_then(|p| p.intersect(&IndexPattern::at_least(&u, t)))
        .map_err(err)?;
    let ypat = if space.is_selfdual() {
        IndexPattern::residues(&u, m, &[(-res).rem_euclid(m as i64)])
            .and_then(|p| p.intersect(&IndexPattern::at_most(&u, -t)))
            .map_err(err)?
    } else {
        pos.clone()
    };
    let yside = space.perp_side(Side::Left);
    let mut shift = |side: Side| {
        if r.gen_bool(0.5) {
            random_vector(r, space, side, t as u64 - 1)
        } else {
            Vector::zero(side)
        }
    };
    let (ax, ay) = (shift(Side::Left), shift(yside));
    let x = Subspace::span(space, Side::Left, &[], &[TailFamily::new(pos.clone(), ax)]).map_err(err)?;
    let y = Subspace::span(space, yside, &[], &[TailFamily::new(ypat.clone(), ay)]).map_err(err)?;
    if Subspace::pairs_nondegenerately(&x, &y).map_err(err)? {
        return Ok((x, y));
    }
    let x = Subspace::coordinate(space, Side::Left, &pos).map_err(err)?;
    let y = Subspace::coordinate(space, yside, &ypat).map_err(err)?;
    Ok((x, y))
}

/// With `U = ((T + X)^⊥ + Y)^⊥`: `U = ((U + X)^⊥ + Y)^⊥`.
pub fn triple_perp(seed: u64) -> LawResult {
    let mut r = rng(seed);
    let space = random_space(&mut r);
    let (x, y) = paired(&mut r, &space)?;
    let t = random_subspace(&mut r, &space, Side::Left);
    let u = Subspace::triple_perp(&t, &x, &y).map_err(err)?;
    let again = u.sum(&x).map_err(err)?.perp().sum(&y).map_err(err)?.perp();
    ensure(u == again, "U = ((U + X)^⊥ + Y)^⊥", &[&t, &x, &y])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_seeds_hold() {
        for seed in 0..30 {
            galois(seed).unwrap();
            de_morgan(seed).unwrap();
            triple_perp(seed).unwrap();
        }
    }
}
