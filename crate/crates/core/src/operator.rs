//! Finite-rank operators `sum w (x) u` with `w` on the left side and `u` on the right side.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::Scalar;
use crate::space::{Basis, Side, SpaceSpec, Vector};

/// Stored as coefficients on basis tensors `e_a (x) f_b`, which is already canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Operator {
    terms: BTreeMap<(Basis, Basis), Scalar>,
}

impl Operator {
    pub fn zero() -> Self {
        Operator::default()
    }

    pub fn rank_one(w: &Vector, u: &Vector) -> Self {
        let mut t = Operator::zero();
        t.add_rank_one(w, u, &Scalar::one());
        t
    }

    pub fn add_rank_one(&mut self, w: &Vector, u: &Vector, c: &Scalar) {
        for (&a, x) in w.coeffs() {
            for (&b, y) in u.coeffs() {
                self.add_term(a, b, x * y * c);
            }
        }
    }

    fn add_term(&mut self, a: Basis, b: Basis, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(Basis, Basis), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &Operator) -> Operator {
        self.combined(other, &Scalar::one())
    }

    pub fn minus(&self, other: &Operator) -> Operator {
        self.combined(other, &-Scalar::one())
    }

    pub fn scaled(&self, c: &Scalar) -> Operator {
        Operator::zero().combined(self, c)
    }

    fn combined(&self, other: &Operator, c: &Scalar) -> Operator {
        let mut out = self.clone();
        for (&(a, b), x) in &other.terms {
            out.add_term(a, b, x * c);
        }
        out
    }

    /// Writes the operator as `sum_k w_k (x) u_k` with distinct basis vectors `u_k`.
    pub fn factors(&self, space: &SpaceSpec) -> Vec<(Vector, Vector)> {
        let right = space.norm(Side::Right);
        let mut by_right: BTreeMap<Basis, Vector> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            by_right.entry(b).or_insert_with(|| Vector::zero(Side::Left)).add_term(a, c.clone());
        }
        by_right.into_iter().map(|(b, w)| (w, Vector::basis(right, b))).collect()
    }

    /// `(w (x) u) . x = <x, u> w`.
    pub fn apply(&self, space: &SpaceSpec, x: &Vector) -> Result<Vector> {
        if space.norm(x.side()) != Side::Left {
            return Err(Error::SideMismatch);
        }
        let mut out = Vector::zero(Side::Left);
        for (&(a, b), c) in &self.terms {
            let mut s = Scalar::zero();
            for (&xb, xc) in x.coeffs() {
                let p = space.pair_basis(xb, b);
                if !p.is_zero() {
                    s += xc * p;
                }
            }
            if !s.is_zero() {
                out.add_term(a, s * c);
            }
        }
        Ok(out)
    }

    /// Action on the right side: `(w (x) u) . y = -<w, y> u`.
    pub fn apply_dual(&self, space: &SpaceSpec, y: &Vector) -> Result<Vector> {
        let right = space.norm(Side::Right);
        if space.norm(y.side()) != right {
            return Err(Error::SideMismatch);
        }
        let mut out = Vector::zero(right);
        for (&(a, b), c) in &self.terms {
            let mut s = Scalar::zero();
            for (&yb, yc) in y.coeffs() {
                let p = space.pair_basis(a, yb);
                if !p.is_zero() {
                    s += yc * p;
                }
            }
            if !s.is_zero() {
                out.add_term(b, -(s * c));
            }
        }
        Ok(out)
    }

    /// `(w (x) u)(w' (x) u') = <w', u> w (x) u'`.
    pub fn compose(&self, space: &SpaceSpec, other: &Operator) -> Operator {
        let mut out = Operator::zero();
        for (&(a, b), x) in &self.terms {
            for (&(a2, b2), y) in &other.terms {
                let p = space.pair_basis(a2, b);
                if !p.is_zero() {
                    out.add_term(a, b2, x * y * p);
                }
            }
        }
        out
    }

    pub fn bracket(space: &SpaceSpec, s: &Operator, t: &Operator) -> Operator {
        s.compose(space, t).minus(&t.compose(space, s))
    }

    fn swap_terms(&self, space: &SpaceSpec) -> Result<Operator> {
        if !space.is_selfdual() {
            return Err(Error::RequiresSelfdual);
        }
        let mut out = Operator::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(b, a, c.clone());
        }
        Ok(out)
    }

    /// `w (x) u -> w (x) u - u (x) w`.
    pub fn lambda(&self, space: &SpaceSpec) -> Result<Operator> {
        Ok(self.minus(&self.swap_terms(space)?))
    }

    /// `w (x) u -> w (x) u + u (x) w`.
    pub fn sym(&self, space: &SpaceSpec) -> Result<Operator> {
        Ok(self.plus(&self.swap_terms(space)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::q;
    use crate::pattern::{IndexPattern, Universe, UniverseKind};
    use crate::space::PairingKind;

    fn standard() -> SpaceSpec {
        SpaceSpec::dual_pair("V", "Vstar", Universe::new(UniverseKind::Positive))
    }

    fn e(i: i64) -> Vector {
        Vector::regular(Side::Left, i)
    }

    fn f(i: i64) -> Vector {
        Vector::regular(Side::Right, i)
    }

    #[test]
    fn apply_kronecker() {
        let s = standard();
        let t = Operator::rank_one(&e(1), &f(2));
        assert_eq!(t.apply(&s, &e(2)).unwrap(), e(1));
        assert!(t.apply(&s, &e(1)).unwrap().is_zero());
    }

    #[test]
    fn apply_with_all_ones_special() {
        let mut s = standard();
        let v = s.add_special(Side::Left, "v").unwrap();
        s.push_row(Side::Left, v, IndexPattern::all(s.universe()), q(1)).unwrap();
        let t = Operator::rank_one(&e(1), &f(3));
        let x = Vector::basis(Side::Left, Basis::Special(v));
        assert_eq!(t.apply(&s, &x).unwrap(), e(1));
    }

    #[test]
    fn commutation_relation() {
        let s = standard();
        let a = Operator::rank_one(&e(1), &f(2));
        let b = Operator::rank_one(&e(2), &f(3));
        assert_eq!(Operator::bracket(&s, &a, &b), Operator::rank_one(&e(1), &f(3)));
        assert!(Operator::bracket(&s, &a, &a).is_zero());
    }

    #[test]
    fn lambda_and_sym() {
        let s = SpaceSpec::selfdual("V", PairingKind::SelfdualSymmetric, Universe::new(UniverseKind::Nonzero)).unwrap();
        let t = Operator::rank_one(&e(1), &e(2));
        let expect = Operator::rank_one(&e(1), &e(2)).minus(&Operator::rank_one(&e(2), &e(1)));
        assert_eq!(t.lambda(&s).unwrap(), expect);
        assert!(Operator::rank_one(&e(3), &e(3)).lambda(&s).unwrap().is_zero());
        let sym = Operator::rank_one(&e(1), &e(2)).plus(&Operator::rank_one(&e(2), &e(1)));
        assert_eq!(t.sym(&s).unwrap(), sym);
        assert_eq!(t.lambda(&standard()), Err(Error::RequiresSelfdual));
    }
}
