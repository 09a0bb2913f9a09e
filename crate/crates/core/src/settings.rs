//! The worked example settings, built directly through the library API.

use std::sync::Arc;

use crate::error::Result;
use crate::kernel::q;
use crate::levi::{LeviDatum, LieKind};
use crate::pattern::{IndexPattern, Universe, UniverseKind};
use crate::space::{Basis, PairingKind, Side, SpaceSpec, Vector};
use crate::subspace::{Space, Subspace, TailFamily};

/// A space with named subspaces and an optional Levi datum.
#[derive(Clone, Debug)]
pub struct Setting {
    pub name: &'static str,
    pub space: Space,
    pub subspaces: Vec<(String, Subspace)>,
    pub levi: Option<LeviDatum>,
}

impl Setting {
    pub fn get(&self, name: &str) -> &Subspace {
        &self.subspaces.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no subspace {name}")).1
    }
}

fn e(side: Side, i: i64) -> Vector {
    Vector::regular(side, i)
}

fn residues_from(u: &Universe, m: u64, r: i64, from: i64) -> IndexPattern {
    IndexPattern::residues(u, m, &[r])
        .and_then(|p| p.intersect(&IndexPattern::at_least(u, from)))
        .expect("valid pattern")
}

fn levi(space: &Space, kind: LieKind, pairs: &[(&Subspace, &Subspace)]) -> Result<LeviDatum> {
    LeviDatum::new(space, kind, pairs.iter().map(|(x, y)| ((*x).clone(), (*y).clone())).collect(), None)
}

/// Special `v` with `<v, v*_j> = 1`; odd and even coordinate subspaces.
pub fn two_couple() -> Result<Setting> {
    let u = Universe::new(UniverseKind::Positive);
    let mut s = SpaceSpec::dual_pair("V", "Vstar", u.clone());
    let v = s.add_special(Side::Left, "v")?;
    s.push_row(Side::Left, v, IndexPattern::all(&u), q(1))?;
    let space: Space = Arc::new(s);
    let odd = IndexPattern::residues(&u, 2, &[1])?;
    let even = IndexPattern::residues(&u, 2, &[0])?;
    let x1 = Subspace::coordinate(&space, Side::Left, &odd)?;
    let x2 = Subspace::coordinate(&space, Side::Left, &even)?;
    let y1 = Subspace::coordinate(&space, Side::Right, &odd)?;
    let y2 = Subspace::coordinate(&space, Side::Right, &even)?;
    let l = levi(&space, LieKind::Sl, &[(&x1, &y1), (&x2, &y2)])?;
    Ok(Setting {
        name: "two-couple",
        space,
        subspaces: vec![("X1".into(), x1), ("X2".into(), x2), ("Y1".into(), y1), ("Y2".into(), y2)],
        levi: Some(l),
    })
}

/// Dual bases; `X_1 = span{v_1 + v_odd}`, `X_2 = span{v_1 + v_even}`, `Y_2 = span{v*_2 + v*_even}`.
pub fn three_parabolic() -> Result<Setting> {
    let u = Universe::new(UniverseKind::Positive);
    let space: Space = Arc::new(SpaceSpec::dual_pair("V", "Vstar", u.clone()));
    let (l, r) = (Side::Left, Side::Right);
    let odd = residues_from(&u, 2, 1, 3);
    let even = residues_from(&u, 2, 0, 4);
    let x1 = Subspace::span(&space, l, &[], &[TailFamily::new(odd.clone(), e(l, 1))])?;
    let x2 = Subspace::span(&space, l, &[], &[TailFamily::new(even.clone(), e(l, 1))])?;
    let y1 = Subspace::coordinate(&space, r, &odd)?;
    let y2 = Subspace::span(&space, r, &[], &[TailFamily::new(even, e(r, 2))])?;
    let lv = levi(&space, LieKind::Sl, &[(&x1, &y1), (&x2, &y2)])?;
    Ok(Setting {
        name: "three-parabolic",
        space,
        subspaces: vec![("X1".into(), x1), ("X2".into(), x2), ("Y1".into(), y1), ("Y2".into(), y2)],
        levi: Some(lv),
    })
}

/// `X = span{v_1 + v_i : i >= 2}`, `Y = span{v*_i : i >= 2}`.
pub fn one_block() -> Result<Setting> {
    let u = Universe::new(UniverseKind::Positive);
    let space: Space = Arc::new(SpaceSpec::dual_pair("V", "Vstar", u.clone()));
    let tail = IndexPattern::at_least(&u, 2);
    let x = Subspace::span(&space, Side::Left, &[], &[TailFamily::new(tail.clone(), e(Side::Left, 1))])?;
    let y = Subspace::coordinate(&space, Side::Right, &tail)?;
    let lv = levi(&space, LieKind::Sl, &[(&x, &y)])?;
    Ok(Setting { name: "one-block", space, subspaces: vec![("X".into(), x), ("Y".into(), y)], levi: Some(lv) })
}

/// Residue sets `S_k` modulo 40 of the rows of `w_k`. The last set repeats 29 from `S_13`;
/// `fifteenth_fix` replaces it by 39.
pub fn eight_five_rows(fifteenth_fix: bool) -> Vec<Vec<i64>> {
    vec![
        vec![1, 2],
        vec![3, 6],
        vec![7, 8],
        vec![4, 11],
        vec![9, 12],
        vec![13, 14],
        vec![5, 16],
        vec![10, 17],
        vec![15, 18],
        vec![19, 20],
        vec![21, 22, 23, 24],
        vec![25, 26, 27, 28],
        vec![29, 30, 31, 32],
        vec![33, 34, 35, 36],
        vec![37, 38, if fifteenth_fix { 39 } else { 29 }, 0],
    ]
}

/// Specials `z, w_1..w_15` and their tilde partners; `X_k`, `Y_k` by residue mod 5.
pub fn eight_five(fifteenth_fix: bool) -> Result<Setting> {
    let u = Universe::new(UniverseKind::Positive);
    let mut s = SpaceSpec::dual_pair("V", "Vstar", u.clone());
    let z = s.add_special(Side::Left, "z")?;
    let zt = s.add_special(Side::Right, "zt")?;
    let ws: Vec<usize> = (1..=15).map(|k| s.add_special(Side::Left, &format!("w{k}"))).collect::<Result<_>>()?;
    let wts: Vec<usize> = (1..=15).map(|k| s.add_special(Side::Right, &format!("wt{k}"))).collect::<Result<_>>()?;
    for &a in &ws {
        for &b in &wts {
            s.set_gram(a, b, q(1));
        }
    }
    for k in 10..15 {
        s.set_gram(z, wts[k], q(1));
        s.set_gram(ws[k], zt, q(1));
    }
    for (k, rows) in eight_five_rows(fifteenth_fix).iter().enumerate() {
        let p = IndexPattern::residues(&u, 40, rows)?;
        s.push_row(Side::Left, ws[k], p.clone(), q(1))?;
        s.push_row(Side::Right, wts[k], p, q(1))?;
    }
    let space: Space = Arc::new(s);
    let mut subspaces = Vec::new();
    let mut pairs = Vec::new();
    for k in 1..=5 {
        let p = IndexPattern::residues(&u, 5, &[k])?;
        let x = Subspace::coordinate(&space, Side::Left, &p)?;
        let y = Subspace::coordinate(&space, Side::Right, &p)?;
        subspaces.push((format!("X{k}"), x.clone()));
        subspaces.push((format!("Y{k}"), y.clone()));
        pairs.push((x, y));
    }
    let _ = zt;
    let lv = LeviDatum::new(&space, LieKind::Sl, pairs, None)?;
    Ok(Setting { name: "eight-five", space, subspaces, levi: Some(lv) })
}

/// Dual bases over the integers; `X_1 = span{v_i : i >= 1}`, `Y_1 = span{v*_0 + v*_i : i >= 1}`,
/// `X_2`, `Y_2` the negative coordinates.
pub fn negative() -> Result<Setting> {
    let u = Universe::new(UniverseKind::Integers);
    let space: Space = Arc::new(SpaceSpec::dual_pair("V", "Vstar", u.clone()));
    let pos = IndexPattern::at_least(&u, 1);
    let neg = IndexPattern::at_most(&u, -1);
    let x1 = Subspace::coordinate(&space, Side::Left, &pos)?;
    let y1 = Subspace::span(&space, Side::Right, &[], &[TailFamily::new(pos, e(Side::Right, 0))])?;
    let x2 = Subspace::coordinate(&space, Side::Left, &neg)?;
    let y2 = Subspace::coordinate(&space, Side::Right, &neg)?;
    let lv = levi(&space, LieKind::Sl, &[(&x1, &y1), (&x2, &y2)])?;
    Ok(Setting {
        name: "negative",
        space,
        subspaces: vec![("X1".into(), x1), ("X2".into(), x2), ("Y1".into(), y1), ("Y2".into(), y2)],
        levi: Some(lv),
    })
}

/// Hyperbolic pairing on nonzero indices; `W = span{v_1 + v_i : i != ±1}` with `so(W)` or `sp(W)`.
pub fn selfdual(kind: PairingKind) -> Result<Setting> {
    let u = Universe::new(UniverseKind::Nonzero);
    let space: Space = Arc::new(SpaceSpec::selfdual("V", kind, u.clone())?);
    let pat = IndexPattern::all(&u).minus(&IndexPattern::finite_set(&u, [1, -1]))?;
    let w = Subspace::span(&space, Side::Left, &[], &[TailFamily::new(pat, e(Side::Left, 1))])?;
    let lk = if kind == PairingKind::SelfdualSymmetric { LieKind::So } else { LieKind::Sp };
    let lv = LeviDatum::new(&space, lk, Vec::new(), Some(w.clone()))?;
    let name = if lk == LieKind::So { "selfdual-so" } else { "selfdual-sp" };
    Ok(Setting { name, space, subspaces: vec![("W".into(), w)], levi: Some(lv) })
}

/// Every setting above, with the corrected fifteenth row.
pub fn all() -> Result<Vec<Setting>> {
    Ok(vec![
        two_couple()?,
        three_parabolic()?,
        one_block()?,
        eight_five(true)?,
        negative()?,
        selfdual(PairingKind::SelfdualSymmetric)?,
        selfdual(PairingKind::SelfdualAntisymmetric)?,
    ])
}

pub fn special(space: &SpaceSpec, side: Side, name: &str) -> Vector {
    let s = space.special_index(side, name).unwrap_or_else(|| panic!("no special {name}"));
    Vector::basis(space.norm(side), Basis::Special(s))
}
