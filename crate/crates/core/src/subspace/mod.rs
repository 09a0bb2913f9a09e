//! Pattern-representable subspaces of a paired space.
//!
//! A subspace is stored relative to a [`Frame`] `(N, M)` as a pair `(L, Q)`:
//!
//! * `L_b` is a subspace of the slot space `K` of block `b`; every tail position of block
//!   `b` carries a coefficient vector in `L_b`;
//! * `Q` is a subspace of `R = W + sum_b K_b`, the window coordinates together with the
//!   block sums `eps_b` of the tail coefficient vectors, and its block parts lie in `L_b`.
//!
//! A vector belongs to the subspace iff both conditions hold. The class is closed under
//! sums, intersections and perps, and each operation reduces to finite linear algebra
//! on `R` once operands share a frame.

mod frame;
mod generators;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

pub use frame::Frame;
pub(crate) use frame::Layout;
pub use generators::{Family, Generators};

use crate::error::{Error, Result};
use crate::kernel::{LinSpace, Matrix, Scalar};
use crate::pattern::IndexPattern;
use crate::space::{Basis, Side, SpaceSpec, Vector};

pub type Space = Arc<SpaceSpec>;

/// Dimension of a quotient of subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

impl QuotientDim {
    pub fn at_most(self, n: u64) -> bool {
        matches!(self, QuotientDim::Finite(k) if k <= n)
    }
}

impl fmt::Display for QuotientDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDim::Finite(n) => write!(f, "{n}"),
            QuotientDim::Infinite => write!(f, "infinite"),
        }
    }
}

/// Members `anchor + lead * v_i + mirror * v_{-i}` for `i` in an infinite pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailFamily {
    pub pattern: IndexPattern,
    pub anchor: Vector,
    pub lead: Scalar,
    pub mirror: Scalar,
}

impl TailFamily {
    pub fn new(pattern: IndexPattern, anchor: Vector) -> Self {
        TailFamily { pattern, anchor, lead: Scalar::one(), mirror: Scalar::zero() }
    }

    pub fn member(&self, i: i64) -> Vector {
        let side = self.anchor.side();
        let mut v = self.anchor.clone();
        v.add_term(Basis::Regular(i), self.lead.clone());
        if !self.mirror.is_zero() {
            v.add_term(Basis::Regular(-i), self.mirror.clone());
        }
        v.with_side(side)
    }
}

#[derive(Clone)]
pub struct Subspace {
    space: Space,
    side: Side,
    frame: Frame,
    l: Vec<LinSpace>,
    q: LinSpace,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({})", self)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generators().render(&self.space))
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Eq for Subspace {}

fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

impl Subspace {
    fn base_frame(space: &SpaceSpec) -> Frame {
        let (n, m) = space.base_frame();
        Frame::new(n, m)
    }

    fn layout(&self) -> Layout {
        Layout::new(&self.space, self.side, self.frame)
    }

    fn slot_dim(&self) -> usize {
        self.layout().slots
    }

    pub fn zero(space: &Space, side: Side) -> Subspace {
        let side = space.norm(side);
        let frame = Subspace::base_frame(space);
        let lay = Layout::new(space, side, frame);
        Subspace {
            space: space.clone(),
            side,
            frame,
            l: vec![LinSpace::zero(lay.slots); lay.blocks()],
            q: LinSpace::zero(lay.dim()),
        }
    }

    pub fn full(space: &Space, side: Side) -> Subspace {
        let side = space.norm(side);
        let frame = Subspace::base_frame(space);
        let lay = Layout::new(space, side, frame);
        Subspace {
            space: space.clone(),
            side,
            frame,
            l: vec![LinSpace::full(lay.slots); lay.blocks()],
            q: LinSpace::full(lay.dim()),
        }
    }

    /// Span of finitely many vectors and tail families, all on `side`.
    pub fn span(space: &Space, side: Side, vectors: &[Vector], families: &[TailFamily]) -> Result<Subspace> {
        let side = space.norm(side);
        let mut frame = Subspace::base_frame(space);
        let check = |v: &Vector| -> Result<()> {
            if space.norm(v.side()) != side {
                return Err(Error::SideMismatch);
            }
            match v.coeffs().keys().find(|&&b| !space.basis_valid(side, b)) {
                Some(b) => Err(Error::PreconditionViolation(format!("basis element {b:?} not in the space"))),
                None => Ok(()),
            }
        };
        for v in vectors {
            check(v)?;
            frame.threshold = frame.threshold.max(v.max_abs_index());
        }
        for fam in families {
            check(&fam.anchor)?;
            if fam.pattern.universe() != space.universe() {
                return Err(Error::UniverseMismatch);
            }
            if !fam.pattern.is_infinite() {
                return Err(Error::InvalidPattern("tail family over a finite pattern".into()));
            }
            if fam.lead.is_zero() && fam.mirror.is_zero() {
                return Err(Error::InvalidPattern("tail family with no varying term".into()));
            }
            if !fam.mirror.is_zero() && !space.universe().two_sided() {
                return Err(Error::InvalidPattern("mirror term needs a two-sided universe".into()));
            }
            frame = frame.join(Frame::new(fam.pattern.threshold().max(fam.anchor.max_abs_index()), fam.pattern.modulus()));
        }
        let lay = Layout::new(space, side, frame);
        let mut lgens: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); lay.blocks()];
        let mut qgens: Vec<Vec<Scalar>> = Vec::new();
        let window_coords = |v: &Vector| -> Result<Vec<Scalar>> {
            let mut z = vec![Scalar::zero(); lay.dim()];
            for (&b, c) in v.coeffs() {
                let k = lay.coord(b).ok_or_else(|| Error::PreconditionViolation(format!("index {b:?} outside the universe")))?;
                z[k] += c;
            }
            Ok(z)
        };
        for v in vectors {
            qgens.push(window_coords(v)?);
        }
        for fam in families {
            for i in fam.pattern.members_within(frame.threshold) {
                let member = fam.member(i);
                check(&member)?;
                qgens.push(window_coords(&member)?);
            }
            let anchor = window_coords(&fam.anchor)?;
            for block in 0..lay.blocks() {
                let p = frame.first_position(block);
                for (i, slot_vec) in [(p as i64, [&fam.lead, &fam.mirror]), (-(p as i64), [&fam.mirror, &fam.lead])] {
                    if !fam.pattern.contains(i) {
                        continue;
                    }
                    let ell: Vec<Scalar> = slot_vec.iter().take(lay.slots).map(|&c| c.clone()).collect();
                    let mut z = anchor.clone();
                    for (t, c) in ell.iter().enumerate() {
                        z[lay.block_coord(block, t)] += c;
                    }
                    lgens[block].push(ell);
                    qgens.push(z);
                }
            }
        }
        Ok(Subspace {
            space: space.clone(),
            side,
            frame,
            l: lgens.into_iter().map(|g| LinSpace::from_vectors(lay.slots, g)).collect(),
            q: LinSpace::from_vectors(lay.dim(), qgens),
        })
    }

    pub fn from_vectors(space: &Space, side: Side, vectors: &[Vector]) -> Result<Subspace> {
        Subspace::span(space, side, vectors, &[])
    }

    /// `span{v_i : i in pattern}`.
    pub fn coordinate(space: &Space, side: Side, pattern: &IndexPattern) -> Result<Subspace> {
        let side = space.norm(side);
        let finite: Vec<Vector> = if pattern.is_infinite() {
            Vec::new()
        } else {
            pattern.finite_members().iter().map(|&i| Vector::regular(side, i)).collect()
        };
        let families = if pattern.is_infinite() {
            vec![TailFamily::new(pattern.clone(), Vector::zero(side))]
        } else {
            Vec::new()
        };
        Subspace::span(space, side, &finite, &families)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        Ok(())
    }

    /// Re-expresses the subspace in a finer frame.
    pub fn refine(&self, to: Frame) -> Subspace {
        if to == self.frame {
            return self.clone();
        }
        assert!(to.refines(self.frame), "refine needs a finer frame");
        let old = self.layout();
        let new = Layout::new(&self.space, self.side, to);
        let mut pi = Matrix::zeros(old.dim(), new.dim());
        let mut constraints: Vec<Vec<Scalar>> = Vec::new();
        let anns: Vec<LinSpace> = self.l.iter().map(LinSpace::annihilator).collect();
        for k in 0..new.window_dim() {
            let b = new.window_basis(k);
            match old.coord(b) {
                Some(j) => pi.set(j, k, Scalar::one()),
                None => {
                    let Basis::Regular(i) = b else { unreachable!("specials stay in the window") };
                    let (block, slot, _) = old.tail_slot(i);
                    pi.set(old.block_coord(block, slot), k, Scalar::one());
                }
            }
        }
        // Coefficients at newly windowed positions must lie in the parent block's L.
        let mut positions: Vec<u64> = new
            .window
            .iter()
            .filter(|i| i.unsigned_abs() > self.frame.threshold)
            .map(|i| i.unsigned_abs())
            .collect();
        positions.sort_unstable();
        positions.dedup();
        for p in positions {
            let parent = self.frame.block_of(p);
            let coords: Vec<Option<usize>> = (0..new.slots)
                .map(|t| new.coord(Basis::Regular(Layout::tail_index(p, t))))
                .collect();
            for a in anns[parent].basis() {
                let mut row = vec![Scalar::zero(); new.dim()];
                for (t, c) in coords.iter().enumerate() {
                    if let Some(c) = c {
                        row[*c] = a[t].clone();
                    }
                }
                constraints.push(row);
            }
        }
        for child in 0..new.blocks() {
            let parent = child % old.blocks();
            for t in 0..new.slots {
                pi.set(old.block_coord(parent, t), new.block_coord(child, t), Scalar::one());
            }
            for a in anns[parent].basis() {
                let mut row = vec![Scalar::zero(); new.dim()];
                for t in 0..new.slots {
                    row[new.block_coord(child, t)] = a[t].clone();
                }
                constraints.push(row);
            }
        }
        let pt = pi.transpose();
        for a in self.q.annihilator().basis() {
            constraints.push(pt.mul_vec(a));
        }
        Subspace {
            space: self.space.clone(),
            side: self.side,
            frame: to,
            l: (0..new.blocks()).map(|b| self.l[b % old.blocks()].clone()).collect(),
            q: LinSpace::kernel_of(new.dim(), &constraints),
        }
    }

    fn aligned(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        self.check_compatible(other)?;
        let f = self.frame.join(other.frame);
        Ok((self.refine(f), other.refine(f)))
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        if self.space.norm(x.side()) != self.side {
            return Err(Error::SideMismatch);
        }
        let lay = self.layout();
        let mut z = vec![Scalar::zero(); lay.dim()];
        let mut tails: std::collections::BTreeMap<u64, Vec<Scalar>> = Default::default();
        for (&b, c) in x.coeffs() {
            if let Some(k) = lay.coord(b) {
                z[k] += c;
                continue;
            }
            let Basis::Regular(i) = b else {
                return Err(Error::PreconditionViolation(format!("unknown basis element {b:?}")));
            };
            if !self.space.universe().contains(i) {
                return Err(Error::PreconditionViolation(format!("index {i} outside the universe")));
            }
            let (block, slot, p) = lay.tail_slot(i);
            tails.entry(p).or_insert_with(|| vec![Scalar::zero(); lay.slots])[slot] += c;
            z[lay.block_coord(block, slot)] += c;
        }
        for (p, v) in &tails {
            if !self.l[self.frame.block_of(*p)].contains(v) {
                return Ok(false);
            }
        }
        Ok(self.q.contains(&z))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let (a, b) = self.aligned(other)?;
        let l = a.l.iter().zip(&b.l).map(|(x, y)| x.sum(y)).collect();
        Ok(Subspace { q: a.q.sum(&b.q), l, ..a })
    }

    /// Exact intersection; total on this representation.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        let (a, b) = self.aligned(other)?;
        let l = a.l.iter().zip(&b.l).map(|(x, y)| x.intersect(y)).collect();
        Ok(Subspace { q: a.q.intersect(&b.q), l, ..a })
    }

    /// `self ⊇ other`.
    pub fn includes(&self, other: &Subspace) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.l.iter().zip(&b.l).all(|(x, y)| x.includes(y)) && a.q.includes(&b.q))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.l == b.l && a.q == b.q)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.l.iter().all(LinSpace::is_zero)
    }

    pub fn dim(&self) -> QuotientDim {
        if self.l.iter().any(|l| !l.is_zero()) {
            QuotientDim::Infinite
        } else {
            QuotientDim::Finite(self.q.dim() as u64)
        }
    }

    /// `dim self / sub`; requires `sub ⊆ self`.
    pub fn quotient_dim(&self, sub: &Subspace) -> Result<QuotientDim> {
        let (b, a) = self.aligned(sub)?;
        if !b.includes(&a)? {
            return Err(Error::PreconditionViolation("quotient_dim needs A ⊆ B".into()));
        }
        if a.l != b.l {
            return Ok(QuotientDim::Infinite);
        }
        Ok(QuotientDim::Finite((b.q.dim() - a.q.dim()) as u64))
    }

    /// Slot Gram matrix `G[s][t] = <slot s at p, slot t at p>` for any tail position `p`.
    fn slot_gram(&self) -> Matrix {
        let lay = self.layout();
        let p = self.frame.threshold + 1;
        let rows = (0..lay.slots)
            .map(|s| {
                (0..lay.slots)
                    .map(|t| {
                        self.space
                            .pair_basis(Basis::Regular(Layout::tail_index(p, s)), Basis::Regular(Layout::tail_index(p, t)))
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(lay.slots, rows)
    }

    /// Pairing on reduced coordinates, left layout by right layout, with block-block entries zero.
    fn reduced_pairing(space: &SpaceSpec, frame: Frame) -> Matrix {
        let left = Layout::new(space, Side::Left, frame);
        let right_side = space.norm(Side::Right);
        let right = Layout::new(space, right_side, frame);
        let mut phi = Matrix::zeros(left.dim(), right.dim());
        let basis_at = |lay: &Layout, k: usize| -> Option<Basis> {
            if lay.is_block_coord(k) {
                let off = k - lay.window_dim();
                let (block, slot) = (off / lay.slots, off % lay.slots);
                Some(Basis::Regular(Layout::tail_index(frame.first_position(block), slot)))
            } else {
                Some(lay.window_basis(k))
            }
        };
        for r in 0..left.dim() {
            for c in 0..right.dim() {
                if left.is_block_coord(r) && right.is_block_coord(c) {
                    continue;
                }
                let (Some(a), Some(b)) = (basis_at(&left, r), basis_at(&right, c)) else { continue };
                let v = space.pair_basis(a, b);
                if !v.is_zero() {
                    phi.set(r, c, v);
                }
            }
        }
        phi
    }

    /// `{u on the opposite side : <s, u> = 0 for all s}`.
    pub fn perp(&self) -> Subspace {
        let base = Subspace::base_frame(&self.space);
        if !self.frame.refines(base) {
            return self.refine(self.frame.join(base)).perp();
        }
        let target = self.space.perp_side(self.side);
        let from_left = self.side == Side::Left;
        let g = self.slot_gram();
        let gt = g.transpose();
        let l: Vec<LinSpace> = self
            .l
            .iter()
            .map(|lb| {
                // left: {u : l^T G u = 0}; right: {x : x^T G l = 0}
                let rows: Vec<Vec<Scalar>> =
                    lb.basis().iter().map(|v| if from_left { gt.mul_vec(v) } else { g.mul_vec(v) }).collect();
                LinSpace::kernel_of(lb.ambient(), &rows)
            })
            .collect();
        let phi = Subspace::reduced_pairing(&self.space, self.frame);
        let tl = Layout::new(&self.space, target, self.frame);
        let mut constraints: Vec<Vec<Scalar>> = if from_left {
            let pt = phi.transpose();
            self.q.basis().iter().map(|v| pt.mul_vec(v)).collect()
        } else {
            self.q.basis().iter().map(|v| phi.mul_vec(v)).collect()
        };
        for (block, lb) in l.iter().enumerate() {
            for a in lb.annihilator().basis() {
                let mut row = vec![Scalar::zero(); tl.dim()];
                for t in 0..tl.slots {
                    row[tl.block_coord(block, t)] = a[t].clone();
                }
                constraints.push(row);
            }
        }
        Subspace {
            space: self.space.clone(),
            side: target,
            frame: self.frame,
            l,
            q: LinSpace::kernel_of(tl.dim(), &constraints),
        }
    }

    pub fn closure(&self) -> Subspace {
        self.perp().perp()
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    /// A complement `C` of `self` inside `sup`: `self ∩ C = 0`, `self + C = sup`.
    pub fn complement_in(&self, sup: &Subspace) -> Result<Subspace> {
        let (a, b) = self.aligned(sup)?;
        if !b.includes(&a)? {
            return Err(Error::PreconditionViolation("complement_in needs A ⊆ B".into()));
        }
        // One windowed position per block lets Q_A reach every block part of L_A.
        let f = a.frame;
        let f = Frame::new(f.threshold + f.modulus, f.modulus);
        let (a, b) = (a.refine(f), b.refine(f));
        let lay = a.layout();
        let lc: Vec<LinSpace> = a
            .l
            .iter()
            .zip(&b.l)
            .map(|(la, lb)| LinSpace::from_vectors(lay.slots, la.complement_in(lb)))
            .collect();
        let mut constraints = Vec::new();
        for (block, l) in lc.iter().enumerate() {
            for ann in l.annihilator().basis() {
                let mut row = vec![Scalar::zero(); lay.dim()];
                for t in 0..lay.slots {
                    row[lay.block_coord(block, t)] = ann[t].clone();
                }
                constraints.push(row);
            }
        }
        let p = b.q.intersect(&LinSpace::kernel_of(lay.dim(), &constraints));
        let qc = LinSpace::from_vectors(lay.dim(), a.q.intersect(&p).complement_in(&p));
        let c = Subspace { l: lc, q: qc, ..a.clone() };
        debug_assert!(a.intersect(&c)?.is_zero());
        debug_assert!(a.sum(&c)?.equals(&b)?);
        Ok(c)
    }

    fn require_selfdual(&self) -> Result<()> {
        if self.space.is_selfdual() {
            Ok(())
        } else {
            Err(Error::RequiresSelfdual)
        }
    }

    pub fn is_isotropic(&self) -> Result<bool> {
        self.require_selfdual()?;
        self.perp().includes(self)
    }

    pub fn is_coisotropic(&self) -> Result<bool> {
        self.require_selfdual()?;
        self.includes(&self.perp())
    }

    /// The restricted pairing `X x Y` is nondegenerate: `X ∩ Y^⊥ = 0` and `Y ∩ X^⊥ = 0`.
    pub fn pairs_nondegenerately(x: &Subspace, y: &Subspace) -> Result<bool> {
        if !same_space(&x.space, &y.space) {
            return Err(Error::SpaceMismatch);
        }
        if x.space.perp_side(x.side) != y.side {
            return Err(Error::SideMismatch);
        }
        Ok(x.intersect(&y.perp())?.is_zero() && y.intersect(&x.perp())?.is_zero())
    }

    /// `((T + X)^⊥ + Y)^⊥`.
    pub fn triple_perp(t: &Subspace, x: &Subspace, y: &Subspace) -> Result<Subspace> {
        if !Subspace::pairs_nondegenerately(x, y)? {
            return Err(Error::DegenerateRestriction("X x Y".into()));
        }
        Ok(t.sum(x)?.perp().sum(y)?.perp())
    }

    /// Basis of the vectors of the subspace supported on specials and `|i| <= r`.
    pub fn window_elements(&self, r: u64) -> Vec<Vector> {
        let s = if r > self.frame.threshold {
            self.refine(Frame::new(r, self.frame.modulus))
        } else {
            self.clone()
        };
        let lay = s.layout();
        let rows: Vec<Vec<Scalar>> = (0..lay.blocks())
            .flat_map(|b| (0..lay.slots).map(move |t| (b, t)))
            .map(|(b, t)| unit(lay.dim(), lay.block_coord(b, t)))
            .collect();
        let inside = s.q.intersect(&LinSpace::kernel_of(lay.dim(), &rows));
        let limit = r as i64;
        let window_ok: Vec<bool> = (0..lay.window_dim())
            .map(|k| match lay.window_basis(k) {
                Basis::Special(_) => true,
                Basis::Regular(i) => i.abs() <= limit,
            })
            .collect();
        let outside: Vec<Vec<Scalar>> = (0..lay.window_dim())
            .filter(|&k| !window_ok[k])
            .map(|k| unit(lay.dim(), k))
            .collect();
        let inside = inside.intersect(&LinSpace::kernel_of(lay.dim(), &outside));
        inside
            .basis()
            .iter()
            .map(|z| {
                Vector::from_terms(self.side, (0..lay.window_dim()).map(|k| (lay.window_basis(k), z[k].clone())))
            })
            .collect()
    }

    /// Elements whose span, together with differences of equal tail vectors at positions
    /// beyond `r` within one block, is the whole subspace.
    pub fn spanning_elements(&self, r: u64) -> Vec<Vector> {
        let s = if r > self.frame.threshold {
            self.refine(Frame::new(r, self.frame.modulus))
        } else {
            self.clone()
        };
        let lay = s.layout();
        s.q.basis().iter().map(|z| s.lift(&lay, z, |b| s.frame.first_position(b))).collect()
    }

    /// Vector with window part of `z` and block parts placed at the chosen positions.
    fn lift(&self, lay: &Layout, z: &[Scalar], position: impl Fn(usize) -> u64) -> Vector {
        let mut v = Vector::zero(self.side);
        for (k, c) in z.iter().enumerate().take(lay.window_dim()) {
            v.add_term(lay.window_basis(k), c.clone());
        }
        for b in 0..lay.blocks() {
            let p = position(b);
            for t in 0..lay.slots {
                v.add_term(Basis::Regular(Layout::tail_index(p, t)), z[lay.block_coord(b, t)].clone());
            }
        }
        v
    }

    /// Sample elements: spanning lifts plus one tail difference per block generator.
    pub fn sample_elements(&self, r: u64) -> Vec<Vector> {
        let mut out = self.spanning_elements(r);
        let f = Frame::new(r.max(self.frame.threshold), self.frame.modulus);
        for (b, l) in self.l.iter().enumerate() {
            let p = f.first_position(b);
            for ell in l.basis() {
                let mut v = Vector::zero(self.side);
                for (t, c) in ell.iter().enumerate() {
                    v.add_term(Basis::Regular(Layout::tail_index(p, t)), c.clone());
                    v.add_term(Basis::Regular(Layout::tail_index(p + f.modulus, t)), -c.clone());
                }
                out.push(v);
            }
        }
        out
    }

    /// Smallest frame (modulus first, then threshold) representing the same subspace.
    pub fn coarsest(&self) -> Subspace {
        // Frames must keep refining the space's own frame so perps stay exact.
        let base = Subspace::base_frame(&self.space);
        let min_n = base.threshold;
        let m = self.frame.modulus;
        for d in (1..=m).filter(|d| m.is_multiple_of(*d) && d % base.modulus == 0) {
            for n in min_n..=self.frame.threshold {
                if let Some(c) = self.coarsen_to(Frame::new(n, d)) {
                    return c;
                }
            }
        }
        self.clone()
    }

    fn coarsen_to(&self, to: Frame) -> Option<Subspace> {
        if to == self.frame {
            return Some(self.clone());
        }
        let fine = self.layout();
        let coarse = Layout::new(&self.space, self.side, to);
        let mut l = Vec::with_capacity(coarse.blocks());
        for cb in 0..coarse.blocks() {
            let mut children = (0..fine.blocks()).filter(|b| b % coarse.blocks() == cb);
            let first = children.next()?;
            if children.any(|b| self.l[b] != self.l[first]) {
                return None;
            }
            l.push(self.l[first].clone());
        }
        let mut pi = Matrix::zeros(coarse.dim(), fine.dim());
        for k in 0..fine.window_dim() {
            let b = fine.window_basis(k);
            match coarse.coord(b) {
                Some(j) => pi.set(j, k, Scalar::one()),
                None => {
                    let Basis::Regular(i) = b else { return None };
                    let (block, slot, _) = coarse.tail_slot(i);
                    pi.set(coarse.block_coord(block, slot), k, Scalar::one());
                }
            }
        }
        for b in 0..fine.blocks() {
            for t in 0..fine.slots {
                pi.set(coarse.block_coord(b % coarse.blocks(), t), fine.block_coord(b, t), Scalar::one());
            }
        }
        let candidate = Subspace { l, q: self.q.image(&pi), frame: to, ..self.clone() };
        (candidate.refine(self.frame).q == self.q).then_some(candidate)
    }

    pub fn slots(&self) -> usize {
        self.slot_dim()
    }
}

#[cfg(test)]
mod tests;
