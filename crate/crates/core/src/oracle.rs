//! Brute-force cross-check of the subspace calculus on finite truncations.
//!
//! A truncation at size `n` keeps the specials and the regular indices `|i| <= n`. Every
//! operation is recomputed densely there and compared with the pattern-level answer on the
//! smaller window `|i| <= c`. The gap `n - c` is a guard band of `2 (N + M)` (plus one
//! period for quotient checks), large enough that boundary effects of the truncated
//! pairing never reach the compared window.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{LinSpace, Matrix, Scalar};
use crate::space::{Basis, Side, SpaceSpec, Vector};
use crate::subspace::{Frame, Generators, QuotientDim, Space, Subspace};

/// Specials and regulars `|i| <= n` of both sides with the dense pairing between them.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    pub cutoff: u64,
    pub left: Vec<Basis>,
    pub right: Vec<Basis>,
    /// `gram[a][b] = <left[a], right[b]>`.
    pub gram: Matrix,
}

impl TruncatedSpace {
    pub fn basis(&self, side: Side) -> &[Basis] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn index(&self, side: Side) -> BTreeMap<Basis, usize> {
        self.basis(side).iter().enumerate().map(|(k, &b)| (b, k)).collect()
    }

    /// Dense coordinates, or `None` when `v` leaves the truncation.
    pub fn coords(&self, space: &SpaceSpec, v: &Vector) -> Option<Vec<Scalar>> {
        let side = space.norm(v.side());
        let idx = self.index(side);
        let mut out = vec![Scalar::zero(); idx.len()];
        for (b, c) in v.coeffs() {
            out[*idx.get(b)?] = c.clone();
        }
        Some(out)
    }
}

pub fn truncate(space: &SpaceSpec, n: u64) -> Result<TruncatedSpace> {
    let (t, m) = space.base_frame();
    let needed = t.max(m);
    if n < needed {
        return Err(Error::CutoffTooSmall { needed, got: n });
    }
    let left = space.window_basis(Side::Left, n);
    let right = space.window_basis(space.norm(Side::Right), n);
    let rows = left.iter().map(|&a| right.iter().map(|&b| space.pair_basis(a, b)).collect()).collect();
    let gram = Matrix::from_rows(right.len(), rows);
    Ok(TruncatedSpace { cutoff: n, left, right, gram })
}

/// Span of the generator members supported inside the truncation.
pub fn project_generators(space: &SpaceSpec, t: &TruncatedSpace, side: Side, g: &Generators) -> LinSpace {
    let dim = t.basis(space.norm(side)).len();
    let mut rows = Vec::new();
    rows.extend(g.vectors.iter().filter_map(|v| t.coords(space, v)));
    for f in &g.families {
        for i in f.pattern.members_within(t.cutoff) {
            rows.extend(t.coords(space, &f.member(i)));
        }
    }
    LinSpace::from_vectors(dim, rows)
}

/// `S` intersected with the truncation, computed from the canonical generators of `S`.
pub fn project_subspace(s: &Subspace, n: u64) -> Result<LinSpace> {
    let t = truncate(s.space(), n)?;
    Ok(project_generators(s.space(), &t, s.side(), &s.generators()))
}

/// Dense annihilator of `l` (a subspace on `side`) inside the opposite truncation.
fn dense_perp(space: &SpaceSpec, t: &TruncatedSpace, side: Side, l: &LinSpace) -> LinSpace {
    let constraints: Vec<Vec<Scalar>> = if space.norm(side) == Side::Left {
        let gt = t.gram.transpose();
        l.basis().iter().map(|s| gt.mul_vec(s)).collect()
    } else {
        l.basis().iter().map(|s| t.gram.mul_vec(s)).collect()
    };
    let other = space.perp_side(side);
    LinSpace::kernel_of(t.basis(space.norm(other)).len(), &constraints)
}

/// Part of `l` supported on `|i| <= r`, in the coordinates of the smaller window.
fn window_part(space: &SpaceSpec, t: &TruncatedSpace, side: Side, l: &LinSpace, r: u64) -> LinSpace {
    let basis = t.basis(space.norm(side));
    let keep: Vec<bool> = basis.iter().map(|b| inside(*b, r)).collect();
    let outside: Vec<Vec<Scalar>> = (0..basis.len())
        .filter(|&k| !keep[k])
        .map(|k| {
            let mut e = vec![Scalar::zero(); basis.len()];
            e[k] = Scalar::one();
            e
        })
        .collect();
    let inner = l.intersect(&LinSpace::kernel_of(basis.len(), &outside));
    let kept: Vec<usize> = (0..basis.len()).filter(|&k| keep[k]).collect();
    LinSpace::from_vectors(kept.len(), inner.basis().iter().map(|v| kept.iter().map(|&k| v[k].clone()).collect()))
}

/// Same subspace as [`window_part`] but kept in the coordinates of the full truncation.
fn window_part_embedded(space: &SpaceSpec, t: &TruncatedSpace, side: Side, l: &LinSpace, r: u64) -> LinSpace {
    let basis = t.basis(space.norm(side));
    let kept: Vec<usize> = (0..basis.len()).filter(|&k| inside(basis[k], r)).collect();
    window_part(space, t, side, l, r).reindex(basis.len(), &kept)
}

fn inside(b: Basis, r: u64) -> bool {
    match b {
        Basis::Special(_) => true,
        Basis::Regular(i) => i.unsigned_abs() <= r,
    }
}

/// The pattern-level subspace on `|i| <= r`, in window coordinates.
fn pattern_window(s: &Subspace, r: u64) -> Result<LinSpace> {
    let t = truncate_loose(s.space(), r);
    let dim = t.basis(s.space().norm(s.side())).len();
    let rows: Vec<Vec<Scalar>> = s
        .window_elements(r)
        .iter()
        .map(|v| t.coords(s.space(), v).ok_or_else(|| Error::PreconditionViolation("window element leaves window".into())))
        .collect::<Result<_>>()?;
    Ok(LinSpace::from_vectors(dim, rows))
}

/// Truncation without the size check; only the bases are used.
fn truncate_loose(space: &SpaceSpec, n: u64) -> TruncatedSpace {
    TruncatedSpace {
        cutoff: n,
        left: space.window_basis(Side::Left, n),
        right: space.window_basis(space.norm(Side::Right), n),
        gram: Matrix::zeros(0, 0),
    }
}

/// One operation to recompute densely.
#[derive(Clone, Debug)]
pub enum OracleOp {
    Membership(Subspace, Vec<Vector>),
    Perp(Subspace),
    Closure(Subspace),
    Sum(Subspace, Subspace),
    Intersect(Subspace, Subspace),
    /// `dim A / B` with `B ⊆ A`.
    QuotientDim(Subspace, Subspace),
}

impl OracleOp {
    pub fn name(&self) -> &'static str {
        match self {
            OracleOp::Membership(..) => "membership",
            OracleOp::Perp(_) => "perp",
            OracleOp::Closure(_) => "closure",
            OracleOp::Sum(..) => "sum",
            OracleOp::Intersect(..) => "intersect",
            OracleOp::QuotientDim(..) => "quotient_dim",
        }
    }

    fn operands(&self) -> Vec<&Subspace> {
        match self {
            OracleOp::Membership(s, _) | OracleOp::Perp(s) | OracleOp::Closure(s) => vec![s],
            OracleOp::Sum(a, b) | OracleOp::Intersect(a, b) | OracleOp::QuotientDim(a, b) => vec![a, b],
        }
    }
}

/// Dense value at one cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
enum DenseValue {
    Space(LinSpace),
    /// Dense answer per sample, `None` for samples outside the window.
    Answers(Vec<Option<bool>>),
    /// Window quotient dimensions at radius `c` and `c + M`.
    Growth(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffCheck {
    pub cutoff: u64,
    pub truncation: u64,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub op: &'static str,
    pub checks: Vec<CutoffCheck>,
    /// The dense values at the last two cutoffs agree on the smaller window.
    pub stable: bool,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.stable && self.checks.iter().all(|c| c.agree)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.op)?;
        for c in &self.checks {
            write!(f, " c={} ({}) {};", c.cutoff, c.detail, if c.agree { "agree" } else { "DISAGREE" })?;
        }
        write!(f, " {}", if self.stable { "stable" } else { "not stable" })
    }
}

fn op_frame(space: &SpaceSpec, op: &OracleOp, results: &[&Subspace]) -> Frame {
    let (t, m) = space.base_frame();
    op.operands().into_iter().chain(results.iter().copied()).fold(Frame::new(t, m), |f, s| f.join(s.frame()))
}

/// Recomputes `op` densely at each cutoff and compares with the pattern-level result.
pub fn oracle_check(op: &OracleOp, cutoffs: &[u64]) -> Result<OracleReport> {
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) || cutoffs.is_empty() {
        return Err(Error::PreconditionViolation("cutoffs must be nonempty and increasing".into()));
    }
    let space: Space = op.operands()[0].space().clone();
    let sp = space.as_ref();
    // Pattern-level result.
    let pattern_result: Option<Subspace> = match op {
        OracleOp::Membership(..) | OracleOp::QuotientDim(..) => None,
        OracleOp::Perp(s) => Some(s.perp()),
        OracleOp::Closure(s) => Some(s.closure()),
        OracleOp::Sum(a, b) => Some(a.sum(b)?),
        OracleOp::Intersect(a, b) => Some(a.intersect(b)?),
    };
    let quotient = match op {
        OracleOp::QuotientDim(a, b) => Some(a.quotient_dim(b)?),
        _ => None,
    };
    let mut frame_of: Vec<&Subspace> = Vec::new();
    if let Some(r) = &pattern_result {
        frame_of.push(r);
    }
    let closure_perp;
    if let OracleOp::Closure(s) = op {
        closure_perp = s.perp();
        frame_of.push(&closure_perp);
    }
    let frame = op_frame(sp, op, &frame_of);
    let band = frame.threshold + frame.modulus;
    let mut checks = Vec::new();
    let mut values: Vec<DenseValue> = Vec::new();
    for &c in cutoffs {
        let n = c + 2 * band + frame.modulus;
        let t = truncate(sp, n)?;
        let proj = |s: &Subspace| project_generators(sp, &t, s.side(), &s.generators());
        let (value, agree, detail) = match op {
            OracleOp::Membership(s, xs) => {
                let dense = proj(s);
                let mut answers = Vec::new();
                let mut agree = true;
                for x in xs {
                    if x.max_abs_index() > c {
                        answers.push(None);
                        continue;
                    }
                    let d = t.coords(sp, x).map(|v| dense.contains(&v)).unwrap_or(false);
                    agree &= d == s.contains(x)?;
                    answers.push(Some(d));
                }
                let inside = answers.iter().flatten().count();
                let members = answers.iter().flatten().filter(|a| **a).count();
                let detail = format!("{members} of {inside} samples inside");
                (DenseValue::Answers(answers), agree, detail)
            }
            OracleOp::QuotientDim(a, b) => {
                let (da, db) = (proj(a), proj(b));
                let at = |r: u64| {
                    window_part(sp, &t, a.side(), &da, r).dim() as i64 - window_part(sp, &t, b.side(), &db, r).dim() as i64
                };
                let (d0, d1) = (at(c), at(c + frame.modulus));
                let agree = match quotient.expect("quotient computed") {
                    QuotientDim::Finite(d) => d0 == d as i64 && d1 == d as i64,
                    QuotientDim::Infinite => d1 > d0,
                };
                (DenseValue::Growth(d0, d1), agree, format!("{d0} -> {d1}"))
            }
            _ => {
                let result = pattern_result.as_ref().expect("subspace result");
                let dense = match op {
                    OracleOp::Perp(s) => dense_perp(sp, &t, s.side(), &proj(s)),
                    OracleOp::Closure(s) => {
                        let p = dense_perp(sp, &t, s.side(), &proj(s));
                        let ps = sp.perp_side(s.side());
                        let p = window_part_embedded(sp, &t, ps, &p, n - band);
                        dense_perp(sp, &t, ps, &p)
                    }
                    OracleOp::Sum(a, b) => proj(a).sum(&proj(b)),
                    OracleOp::Intersect(a, b) => proj(a).intersect(&proj(b)),
                    _ => unreachable!(),
                };
                let dense_w = window_part(sp, &t, result.side(), &dense, c);
                let pat_w = pattern_window(result, c)?;
                let detail = format!("dense dim {}, pattern dim {}", dense_w.dim(), pat_w.dim());
                let agree = dense_w == pat_w;
                (DenseValue::Space(dense_w), agree, detail)
            }
        };
        checks.push(CutoffCheck { cutoff: c, truncation: n, agree, detail });
        values.push(value);
    }
    let stable = match values.len() {
        0 | 1 => true,
        k => stable_between(sp, op, &values[k - 2], &values[k - 1], cutoffs[k - 2], cutoffs[k - 1]),
    };
    Ok(OracleReport { op: op.name(), checks, stable })
}

fn stable_between(space: &SpaceSpec, op: &OracleOp, prev: &DenseValue, last: &DenseValue, c0: u64, c1: u64) -> bool {
    match (prev, last) {
        (DenseValue::Space(a), DenseValue::Space(b)) => {
            let side = match op {
                OracleOp::Perp(s) => space.perp_side(s.side()),
                OracleOp::Closure(s) | OracleOp::Sum(s, _) | OracleOp::Intersect(s, _) => s.side(),
                _ => unreachable!(),
            };
            let big = truncate_loose(space, c1);
            *a == window_part(space, &big, side, b, c0)
        }
        (DenseValue::Answers(a), DenseValue::Answers(b)) => a.iter().zip(b).all(|(x, y)| x.is_none() || x == y),
        (DenseValue::Growth(a0, a1), DenseValue::Growth(b0, b1)) => {
            (a0 == a1) == (b0 == b1) && (a0 != a1 || a0 == b0)
        }
        _ => false,
    }
}
