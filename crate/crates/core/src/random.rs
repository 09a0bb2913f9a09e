//! Seeded random spaces, subspaces and Levi data for property tests.
//!
//! Sizes are kept small (moduli up to 4, windows up to 6) so a dense check at cutoff 40
//! stays cheap.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{q, Scalar};
use crate::levi::{LeviDatum, LieKind};
use crate::pattern::{IndexPattern, Universe, UniverseKind};
use crate::space::{Basis, PairingKind, Side, SpaceSpec, Vector};
use crate::subspace::{Space, Subspace, TailFamily};

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut Rand) -> Scalar {
    let v = rng.gen_range(-2..=2);
    q(if v == 0 { 1 } else { v })
}

fn residue_pattern(rng: &mut Rand, u: &Universe, max_mod: u64) -> IndexPattern {
    let m = rng.gen_range(1..=max_mod);
    let mut res: Vec<i64> = (0..m as i64).filter(|_| rng.gen_bool(0.5)).collect();
    if res.is_empty() {
        res.push(rng.gen_range(0..m as i64));
    }
    IndexPattern::residues(u, m, &res).expect("positive modulus")
}

/// A dual pair or selfdual space over a random universe with up to two specials per side.
pub fn random_space(rng: &mut Rand) -> Space {
    let kind = [UniverseKind::Positive, UniverseKind::Positive, UniverseKind::Nonzero, UniverseKind::Integers]
        .choose(rng)
        .copied()
        .expect("nonempty");
    let u = Universe::new(kind);
    let selfdual = kind == UniverseKind::Nonzero && rng.gen_bool(0.5);
    let mut s = if selfdual {
        let k = if rng.gen_bool(0.5) { PairingKind::SelfdualSymmetric } else { PairingKind::SelfdualAntisymmetric };
        SpaceSpec::selfdual("V", k, u.clone()).expect("nonzero universe")
    } else {
        SpaceSpec::dual_pair("V", "Vstar", u.clone())
    };
    let sides: &[Side] = if selfdual { &[Side::Left] } else { &[Side::Left, Side::Right] };
    for &side in sides {
        for k in 0..rng.gen_range(0..=2) {
            let name = format!("{}{k}", if side == Side::Left { "a" } else { "b" });
            let idx = s.add_special(side, &name).expect("fresh name");
            let pat = residue_pattern(rng, &u, 3);
            let val = small(rng);
            s.push_row(side, idx, pat, val).expect("valid row");
        }
    }
    if !selfdual {
        let (nl, nr) = (s.specials(Side::Left).len(), s.specials(Side::Right).len());
        for a in 0..nl {
            for b in 0..nr {
                if rng.gen_bool(0.3) {
                    let v = small(rng);
                    s.set_gram(a, b, v);
                }
            }
        }
    }
    Arc::new(s)
}

/// Random vector supported on the specials and `|i| <= window`; zero if that is empty.
pub fn random_vector(rng: &mut Rand, space: &SpaceSpec, side: Side, window: u64) -> Vector {
    let basis = space.window_basis(space.norm(side), window);
    let mut v = Vector::zero(side);
    if basis.is_empty() {
        return v;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let b = *basis.choose(rng).expect("nonempty window");
        let c = small(rng);
        v.add_term(b, c);
    }
    v
}

/// Span of up to two vectors and up to two tail families.
pub fn random_subspace(rng: &mut Rand, space: &Space, side: Side) -> Subspace {
    let u = space.universe().clone();
    let vectors: Vec<Vector> = (0..rng.gen_range(0..=2)).map(|_| random_vector(rng, space, side, 6)).collect();
    let mut families = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let from = rng.gen_range(1..=5);
        let pat = residue_pattern(rng, &u, 4);
        let pat = if u.two_sided() && rng.gen_bool(0.25) {
            pat.intersect(&IndexPattern::at_most(&u, -from)).expect("same universe")
        } else {
            pat.intersect(&IndexPattern::at_least(&u, from)).expect("same universe")
        };
        if !pat.is_infinite() {
            continue;
        }
        let anchor = if rng.gen_bool(0.5) { random_vector(rng, space, side, from as u64 - 1) } else { Vector::zero(side) };
        let mut f = TailFamily::new(pat, anchor.with_side(side));
        if u.two_sided() && rng.gen_bool(0.3) {
            f.mirror = small(rng);
        }
        families.push(f);
    }
    Subspace::span(space, side, &vectors, &families).expect("random data is well formed")
}

/// A random sl datum on the plain positive dual pair with `n` summands
/// `X_k = span{a_k + v_i : i in R_k, i >= t}`, `Y_k = span{b_k + v*_i : i in R_k, i >= t}`,
/// where the residue sets `R_k` are disjoint and the anchors sit below `t`.
///
/// Returns `None` when the draw fails validation.
pub fn random_levi(rng: &mut Rand, n: usize) -> Option<(Space, LeviDatum)> {
    let u = Universe::new(UniverseKind::Positive);
    let space: Space = Arc::new(SpaceSpec::dual_pair("V", "Vstar", u.clone()));
    let m = rng.gen_range(n as u64..=n as u64 + 2);
    let mut residues: Vec<i64> = (0..m as i64).collect();
    residues.shuffle(rng);
    // every window index below t adds to the quotients, so t stays small
    let t = *[1, 2, 2, 3].choose(rng).expect("nonempty");
    let mut blocks: Vec<Vec<i64>> = (0..n).map(|k| vec![residues[k]]).collect();
    // a residue class outside every block makes the count uncountable; keep that rare
    let leave_gaps = rng.gen_bool(0.2);
    for &r in &residues[n..] {
        if !leave_gaps || rng.gen_bool(0.5) {
            let k = rng.gen_range(0..n);
            blocks[k].push(r);
        }
    }
    let anchors: Vec<i64> = (1..t).collect();
    let mut summands = Vec::new();
    for r in &blocks {
        let pat = IndexPattern::residues(&u, m, r).ok()?.intersect(&IndexPattern::at_least(&u, t)).ok()?;
        let mut pick = |side: Side| {
            if !anchors.is_empty() && rng.gen_bool(0.5) {
                Vector::basis(side, Basis::Regular(*anchors.choose(rng).expect("nonempty")))
            } else {
                Vector::zero(side)
            }
        };
        let (ax, ay) = (pick(Side::Left), pick(Side::Right));
        let x = Subspace::span(&space, Side::Left, &[], &[TailFamily::new(pat.clone(), ax)]).ok()?;
        let y = Subspace::span(&space, Side::Right, &[], &[TailFamily::new(pat, ay)]).ok()?;
        summands.push((x, y));
    }
    let l = LeviDatum::new(&space, LieKind::Sl, summands, None).ok()?;
    l.validate().ok()?.passed().then_some((space, l))
}

/// First valid draw among `tries` attempts.
pub fn random_levi_retry(rng: &mut Rand, n: usize, tries: usize) -> Option<(Space, LeviDatum)> {
    (0..tries).find_map(|_| random_levi(rng, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = random_space(&mut rng(7));
        let b = random_space(&mut rng(7));
        assert_eq!(*a, *b);
        let sa = random_subspace(&mut rng(3), &a, Side::Left);
        let sb = random_subspace(&mut rng(3), &b, Side::Left);
        assert_eq!(sa.to_string(), sb.to_string());
    }

    #[test]
    fn levi_draws_validate() {
        let mut r = rng(1);
        let mut got = 0;
        for n in 1..=3 {
            for _ in 0..10 {
                if let Some((_, l)) = random_levi(&mut r, n) {
                    assert_eq!(l.len(), n);
                    got += 1;
                }
            }
        }
        assert!(got > 0);
    }
}
