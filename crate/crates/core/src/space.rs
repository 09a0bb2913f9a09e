//! Paired spaces: index universes, special basis vectors, the pairing, and finite vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{fmt_scalar, q, Scalar};
use crate::pattern::{IndexPattern, Universe, UniverseKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairingKind {
    DualPair,
    SelfdualSymmetric,
    SelfdualAntisymmetric,
}

impl PairingKind {
    pub fn is_selfdual(self) -> bool {
        self != PairingKind::DualPair
    }

    /// `<y, x> = sign * <x, y>` for selfdual kinds.
    pub fn sign(self) -> Scalar {
        match self {
            PairingKind::SelfdualAntisymmetric => q(-1),
            _ => q(1),
        }
    }
}

/// A basis element of one side: specials come first in the canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Special(usize),
    Regular(i64),
}

/// A special-regular row: value at regular index `j` given by the last matching rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecialRow {
    rules: Vec<(IndexPattern, Scalar)>,
}

impl SpecialRow {
    pub fn push(&mut self, pattern: IndexPattern, value: Scalar) {
        self.rules.push((pattern, value));
    }

    pub fn rules(&self) -> &[(IndexPattern, Scalar)] {
        &self.rules
    }

    pub fn value(&self, j: i64) -> Scalar {
        self.rules
            .iter()
            .rev()
            .find(|(p, _)| p.contains(j))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Scalar::zero)
    }

    fn period(&self) -> (u64, u64) {
        self.rules
            .iter()
            .fold((0, 1), |(n, m), (p, _)| (n.max(p.threshold()), m.lcm(&p.modulus())))
    }
}

/// A space (dual pair or selfdual) with its pairing.
///
/// Regular basis vectors are indexed by the universe on both sides. For a dual pair the
/// regular pairing is Kronecker; selfdual spaces use the hyperbolic rule
/// `<v_i, v_{-i}> = 1` for `i > 0`, extended by the symmetry sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    names: [String; 2],
    universe: Universe,
    kind: PairingKind,
    specials: [Vec<String>; 2],
    /// `(left special, right special) -> value`
    gram: BTreeMap<(usize, usize), Scalar>,
    /// Left special against right regular.
    left_rows: Vec<SpecialRow>,
    /// Left regular against right special.
    right_rows: Vec<SpecialRow>,
}

fn side_ix(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl SpaceSpec {
    pub fn dual_pair(left: &str, right: &str, universe: Universe) -> Self {
        SpaceSpec {
            names: [left.to_string(), right.to_string()],
            universe,
            kind: PairingKind::DualPair,
            specials: [Vec::new(), Vec::new()],
            gram: BTreeMap::new(),
            left_rows: Vec::new(),
            right_rows: Vec::new(),
        }
    }

    pub fn selfdual(name: &str, kind: PairingKind, universe: Universe) -> Result<Self> {
        if !kind.is_selfdual() {
            return Err(Error::InvalidSpace("selfdual constructor needs a selfdual kind".into()));
        }
        if universe.contains(0) {
            return Err(Error::InvalidSpace("hyperbolic pairing leaves v_0 unpaired; exclude 0".into()));
        }
        if universe.kind() == UniverseKind::Positive {
            return Err(Error::InvalidSpace("hyperbolic pairing needs a two-sided universe".into()));
        }
        for &i in universe.excluded() {
            if universe.contains(-i) {
                return Err(Error::InvalidSpace(format!("index {} lost its partner {}", -i, i)));
            }
        }
        Ok(SpaceSpec {
            names: [name.to_string(), name.to_string()],
            universe,
            kind,
            specials: [Vec::new(), Vec::new()],
            gram: BTreeMap::new(),
            left_rows: Vec::new(),
            right_rows: Vec::new(),
        })
    }

    pub fn kind(&self) -> PairingKind {
        self.kind
    }

    pub fn is_selfdual(&self) -> bool {
        self.kind.is_selfdual()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn name(&self, side: Side) -> &str {
        &self.names[side_ix(self.norm(side))]
    }

    /// Selfdual spaces only have a left side.
    pub fn norm(&self, side: Side) -> Side {
        if self.is_selfdual() {
            Side::Left
        } else {
            side
        }
    }

    /// Side on which `perp` of a subspace on `side` lives.
    pub fn perp_side(&self, side: Side) -> Side {
        self.norm(side.opposite())
    }

    pub fn specials(&self, side: Side) -> &[String] {
        &self.specials[side_ix(self.norm(side))]
    }

    pub fn special_index(&self, side: Side, name: &str) -> Option<usize> {
        self.specials(side).iter().position(|s| s == name)
    }

    pub fn add_special(&mut self, side: Side, name: &str) -> Result<usize> {
        let side = self.norm(side);
        if self.special_index(side, name).is_some() {
            return Err(Error::InvalidSpace(format!("duplicate special {name}")));
        }
        let ix = side_ix(side);
        self.specials[ix].push(name.to_string());
        match side {
            Side::Left => self.left_rows.push(SpecialRow::default()),
            Side::Right => self.right_rows.push(SpecialRow::default()),
        }
        Ok(self.specials[ix].len() - 1)
    }

    /// Sets `<left special s, right special t>`; selfdual spaces also set the mirrored entry.
    pub fn set_gram(&mut self, s: usize, t: usize, value: Scalar) {
        if self.is_selfdual() {
            let mirrored = &value * self.kind.sign();
            self.gram.insert((t, s), mirrored);
        }
        self.gram.insert((s, t), value);
    }

    /// Adds a rule to the row of a special against the regular vectors of the opposite side.
    pub fn push_row(&mut self, side: Side, special: usize, pattern: IndexPattern, value: Scalar) -> Result<()> {
        if pattern.universe() != &self.universe {
            return Err(Error::UniverseMismatch);
        }
        match self.norm(side) {
            Side::Left => self.left_rows[special].push(pattern, value),
            Side::Right => self.right_rows[special].push(pattern, value),
        }
        Ok(())
    }

    pub fn rows(&self, side: Side) -> &[SpecialRow] {
        match self.norm(side) {
            Side::Left => &self.left_rows,
            Side::Right => &self.right_rows,
        }
    }

    /// Threshold and modulus beyond which every special row is periodic.
    pub fn base_frame(&self) -> (u64, u64) {
        self.left_rows
            .iter()
            .chain(&self.right_rows)
            .map(SpecialRow::period)
            .fold((self.universe.min_threshold(), 1), |(n, m), (n2, m2)| (n.max(n2), m.lcm(&m2)))
    }

    fn regular_pair(&self, i: i64, j: i64) -> Scalar {
        match self.kind {
            PairingKind::DualPair => {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            _ => {
                if i != -j {
                    Scalar::zero()
                } else if i > 0 {
                    Scalar::one()
                } else {
                    self.kind.sign()
                }
            }
        }
    }

    /// `<a, b>` for a left basis element `a` and a right basis element `b`.
    pub fn pair_basis(&self, a: Basis, b: Basis) -> Scalar {
        match (a, b) {
            (Basis::Regular(i), Basis::Regular(j)) => self.regular_pair(i, j),
            (Basis::Special(s), Basis::Special(t)) => self.gram.get(&(s, t)).cloned().unwrap_or_else(Scalar::zero),
            (Basis::Special(s), Basis::Regular(j)) => self.left_rows[s].value(j),
            (Basis::Regular(i), Basis::Special(t)) => {
                if self.is_selfdual() {
                    self.left_rows[t].value(i) * self.kind.sign()
                } else {
                    self.right_rows[t].value(i)
                }
            }
        }
    }

    pub fn basis_valid(&self, side: Side, b: Basis) -> bool {
        match b {
            Basis::Regular(i) => self.universe.contains(i),
            Basis::Special(s) => s < self.specials(side).len(),
        }
    }

    /// Bilinear pairing of a left vector with a right vector (any two vectors when selfdual).
    pub fn pair(&self, x: &Vector, u: &Vector) -> Result<Scalar> {
        if self.norm(x.side) != Side::Left || self.norm(u.side) != self.norm(Side::Right) {
            return Err(Error::SideMismatch);
        }
        let mut total = Scalar::zero();
        for (&a, ca) in &x.coeffs {
            for (&b, cb) in &u.coeffs {
                let p = self.pair_basis(a, b);
                if !p.is_zero() {
                    total += ca * cb * p;
                }
            }
        }
        Ok(total)
    }

    pub fn basis_label(&self, side: Side, b: Basis) -> String {
        match b {
            Basis::Special(s) => self.specials(side)[s].clone(),
            Basis::Regular(i) => format!("{}[{}]", self.name(side), i),
        }
    }

    /// Searches the truncated window for a vector annihilating the whole opposite window.
    ///
    /// Returns the left-side witness when one exists. Passing is evidence, not proof.
    pub fn validate_pairing(&self, cutoff: u64) -> Result<PairingReport> {
        let (n0, m0) = self.base_frame();
        let needed = n0 + m0;
        if cutoff < needed {
            return Err(Error::CutoffTooSmall { needed, got: cutoff });
        }
        let lefts = self.window_basis(Side::Left, cutoff);
        let rights = self.window_basis(self.norm(Side::Right), cutoff);
        // Regular indices near the boundary may only be separated by far vectors; check the
        // inner half and let the rest of the window serve as test vectors.
        let inner = cutoff / 2;
        let rows: Vec<Vec<Scalar>> = lefts
            .iter()
            .map(|&a| rights.iter().map(|&b| self.pair_basis(a, b)).collect())
            .collect();
        let m = crate::kernel::Matrix::from_rows(rights.len(), rows).transpose();
        let kernel = m.kernel();
        let inside = |b: &Basis| match b {
            Basis::Special(_) => true,
            Basis::Regular(i) => i.unsigned_abs() <= inner,
        };
        let space = crate::kernel::LinSpace::from_vectors(lefts.len(), kernel);
        let coords: Vec<Vec<Scalar>> = lefts
            .iter()
            .enumerate()
            .filter(|(_, b)| !inside(b))
            .map(|(k, _)| {
                let mut e = vec![Scalar::zero(); lefts.len()];
                e[k] = Scalar::one();
                e
            })
            .collect();
        let outside = crate::kernel::LinSpace::from_vectors(lefts.len(), coords).annihilator();
        let bad = space.intersect(&outside);
        let witness = bad.basis().first().map(|v| {
            let mut w = Vector::zero(Side::Left);
            for (b, c) in lefts.iter().zip(v) {
                w.add_term(*b, c.clone());
            }
            w
        });
        Ok(PairingReport { cutoff, witness })
    }

    /// Specials then regular indices `|i| <= n` of one side.
    pub fn window_basis(&self, side: Side, n: u64) -> Vec<Basis> {
        (0..self.specials(side).len())
            .map(Basis::Special)
            .chain(self.universe.window(n).into_iter().map(Basis::Regular))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub cutoff: u64,
    pub witness: Option<Vector>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// A finite linear combination of basis vectors of one side.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    side: Side,
    coeffs: BTreeMap<Basis, Scalar>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector({:?}", self.side)?;
        for (b, c) in &self.coeffs {
            write!(f, " {}*{:?}", fmt_scalar(c), b)?;
        }
        write!(f, ")")
    }
}

impl Vector {
    pub fn zero(side: Side) -> Self {
        Vector { side, coeffs: BTreeMap::new() }
    }

    pub fn basis(side: Side, b: Basis) -> Self {
        let mut v = Vector::zero(side);
        v.add_term(b, Scalar::one());
        v
    }

    pub fn regular(side: Side, i: i64) -> Self {
        Vector::basis(side, Basis::Regular(i))
    }

    pub fn from_terms(side: Side, terms: impl IntoIterator<Item = (Basis, Scalar)>) -> Self {
        let mut v = Vector::zero(side);
        for (b, c) in terms {
            v.add_term(b, c);
        }
        v
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn coeffs(&self) -> &BTreeMap<Basis, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, b: Basis) -> Scalar {
        self.coeffs.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, b: Basis, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(b).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        for (&b, x) in &other.coeffs {
            self.add_term(b, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        let mut v = Vector::zero(self.side);
        v.add_scaled(self, c);
        v
    }

    pub fn plus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_scaled(other, &Scalar::one());
        v
    }

    pub fn minus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_scaled(other, &-Scalar::one());
        v
    }

    /// Largest `|i|` among regular indices in the support.
    pub fn max_abs_index(&self) -> u64 {
        self.coeffs
            .keys()
            .filter_map(|b| match b {
                Basis::Regular(i) => Some(i.unsigned_abs()),
                Basis::Special(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self, space: &SpaceSpec) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (&b, c)) in self.coeffs.iter().enumerate() {
            let label = space.basis_label(self.side, b);
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&fmt_scalar(&mag));
                out.push('*');
            }
            out.push_str(&label);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> SpaceSpec {
        SpaceSpec::dual_pair("V", "Vstar", Universe::new(UniverseKind::Positive))
    }

    #[test]
    fn kronecker_pairing() {
        let s = standard();
        let v2 = Vector::regular(Side::Left, 2);
        assert_eq!(s.pair(&v2, &Vector::regular(Side::Right, 2)).unwrap(), q(1));
        assert_eq!(s.pair(&v2, &Vector::regular(Side::Right, 3)).unwrap(), q(0));
    }

    #[test]
    fn all_ones_special_row() {
        let mut s = standard();
        let v = s.add_special(Side::Left, "v").unwrap();
        let all = IndexPattern::all(s.universe());
        s.push_row(Side::Left, v, all, q(1)).unwrap();
        let x = Vector::basis(Side::Left, Basis::Special(v));
        assert_eq!(s.pair(&x, &Vector::regular(Side::Right, 7)).unwrap(), q(1));
    }

    #[test]
    fn side_mismatch() {
        let s = standard();
        let v = Vector::regular(Side::Left, 1);
        assert_eq!(s.pair(&v, &v), Err(Error::SideMismatch));
    }

    #[test]
    fn hyperbolic_signs() {
        let u = Universe::new(UniverseKind::Nonzero);
        let s = SpaceSpec::selfdual("V", PairingKind::SelfdualAntisymmetric, u).unwrap();
        let a = Vector::regular(Side::Left, 3);
        let b = Vector::regular(Side::Left, -3);
        assert_eq!(s.pair(&a, &b).unwrap(), q(1));
        assert_eq!(s.pair(&b, &a).unwrap(), q(-1));
        assert_eq!(s.pair(&a, &a).unwrap(), q(0));
    }

    #[test]
    fn duplicate_special_row_fails_validation() {
        let mut s = standard();
        let a = s.add_special(Side::Left, "a").unwrap();
        let b = s.add_special(Side::Left, "b").unwrap();
        for k in [a, b] {
            let p = IndexPattern::residues(s.universe(), 3, &[1]).unwrap();
            s.push_row(Side::Left, k, p, q(1)).unwrap();
        }
        let report = s.validate_pairing(12).unwrap();
        let w = report.witness.expect("a - b pairs to zero everywhere");
        assert_eq!(w.coeffs().len(), 2);
        assert!(standard().validate_pairing(10).unwrap().passed());
    }
}
