//! Eventually periodic sets of integer indices.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UniverseKind {
    Positive,
    Nonzero,
    Integers,
}

/// The regular index set of a space: one of three base sets minus finitely many indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    kind: UniverseKind,
    excluded: BTreeSet<i64>,
}

impl Universe {
    pub fn new(kind: UniverseKind) -> Self {
        Universe { kind, excluded: BTreeSet::new() }
    }

    pub fn with_excluded(kind: UniverseKind, excluded: impl IntoIterator<Item = i64>) -> Self {
        let mut u = Universe::new(kind);
        u.excluded = excluded.into_iter().filter(|&i| u.base_contains(i)).collect();
        u
    }

    pub fn kind(&self) -> UniverseKind {
        self.kind
    }

    pub fn excluded(&self) -> &BTreeSet<i64> {
        &self.excluded
    }

    pub fn two_sided(&self) -> bool {
        self.kind != UniverseKind::Positive
    }

    fn base_contains(&self, i: i64) -> bool {
        match self.kind {
            UniverseKind::Positive => i > 0,
            UniverseKind::Nonzero => i != 0,
            UniverseKind::Integers => true,
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        self.base_contains(i) && !self.excluded.contains(&i)
    }

    /// Smallest threshold beyond which the universe is a pure union of half-lines.
    pub fn min_threshold(&self) -> u64 {
        self.excluded.iter().map(|i| i.unsigned_abs()).max().unwrap_or(0)
    }

    /// Indices `i` with `|i| <= n`, ascending.
    pub fn window(&self, n: u64) -> Vec<i64> {
        let n = n as i64;
        (-n..=n).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            UniverseKind::Positive => "positive",
            UniverseKind::Nonzero => "nonzero",
            UniverseKind::Integers => "integers",
        };
        write!(f, "{base}")?;
        if !self.excluded.is_empty() {
            let ex: Vec<String> = self.excluded.iter().map(|i| i.to_string()).collect();
            write!(f, " excluding {{{}}}", ex.join(","))?;
        }
        Ok(())
    }
}

/// An eventually periodic index set.
///
/// Beyond the threshold `N` (on `|i|`) membership depends only on `i mod M`, with separate
/// residue sets for the positive and the negative tail. Members with `|i| <= N` are listed.
/// Values are always canonical: minimal `M`, then minimal `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexPattern {
    universe: Universe,
    modulus: u64,
    pos: BTreeSet<u64>,
    neg: BTreeSet<u64>,
    threshold: u64,
    finite: BTreeSet<i64>,
}

impl fmt::Debug for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexPattern({self})")
    }
}

#[derive(Clone, Copy)]
enum BoolOp {
    Union,
    Intersect,
    Minus,
}

impl IndexPattern {
    fn build(
        universe: &Universe,
        modulus: u64,
        threshold: u64,
        pos: impl Fn(u64) -> bool,
        neg: impl Fn(u64) -> bool,
        finite: impl Fn(i64) -> bool,
    ) -> Self {
        assert!(modulus > 0);
        let threshold = threshold.max(universe.min_threshold());
        let two = universe.two_sided();
        let p = IndexPattern {
            universe: universe.clone(),
            modulus,
            pos: (0..modulus).filter(|&r| pos(r)).collect(),
            neg: if two { (0..modulus).filter(|&r| neg(r)).collect() } else { BTreeSet::new() },
            threshold,
            finite: universe.window(threshold).into_iter().filter(|&i| finite(i)).collect(),
        };
        p.canonical()
    }

    pub fn empty(universe: &Universe) -> Self {
        IndexPattern::build(universe, 1, 0, |_| false, |_| false, |_| false)
    }

    pub fn all(universe: &Universe) -> Self {
        IndexPattern::build(universe, 1, 0, |_| true, |_| true, |_| true)
    }

    /// `{i : i mod m in residues}`; residues may be given as any representatives.
    pub fn residues(universe: &Universe, modulus: u64, residues: &[i64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidPattern("modulus must be positive".into()));
        }
        let m = modulus as i64;
        let rs: BTreeSet<u64> = residues.iter().map(|r| r.rem_euclid(m) as u64).collect();
        Ok(IndexPattern::build(
            universe,
            modulus,
            0,
            |r| rs.contains(&r),
            |r| rs.contains(&r),
            |i| rs.contains(&(i.rem_euclid(m) as u64)),
        ))
    }

    /// `{i : i >= t}`.
    pub fn at_least(universe: &Universe, t: i64) -> Self {
        IndexPattern::build(universe, 1, t.unsigned_abs(), |_| true, |_| false, |i| i >= t)
    }

    /// `{i : i <= t}`.
    pub fn at_most(universe: &Universe, t: i64) -> Self {
        IndexPattern::build(universe, 1, t.unsigned_abs(), |_| false, |_| true, |i| i <= t)
    }

    /// `{i : |i| >= t}`.
    pub fn abs_at_least(universe: &Universe, t: u64) -> Self {
        IndexPattern::build(universe, 1, t, |_| true, |_| true, |i| i.unsigned_abs() >= t)
    }

    pub fn finite_set(universe: &Universe, members: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = members.into_iter().collect();
        let n = set.iter().map(|i| i.unsigned_abs()).max().unwrap_or(0);
        IndexPattern::build(universe, 1, n, |_| false, |_| false, |i| set.contains(&i))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Residues of the positive tail.
    pub fn residues_pos(&self) -> &BTreeSet<u64> {
        &self.pos
    }

    /// Residues (`i mod M`) of the negative tail.
    pub fn residues_neg(&self) -> &BTreeSet<u64> {
        &self.neg
    }

    pub fn finite_members(&self) -> &BTreeSet<i64> {
        &self.finite
    }

    fn tail_rule(&self, i: i64) -> bool {
        let r = i.rem_euclid(self.modulus as i64) as u64;
        if i > 0 {
            self.pos.contains(&r)
        } else if i < 0 {
            self.neg.contains(&r)
        } else {
            false
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        if !self.universe.contains(i) {
            return false;
        }
        if i.unsigned_abs() <= self.threshold {
            self.finite.contains(&i)
        } else {
            self.tail_rule(i)
        }
    }

    /// Window members the tail rule alone would not predict.
    pub fn added(&self) -> BTreeSet<i64> {
        self.finite.iter().copied().filter(|&i| !self.tail_rule(i)).collect()
    }

    /// Window indices the tail rule predicts but the pattern omits.
    pub fn removed(&self) -> BTreeSet<i64> {
        self.universe
            .window(self.threshold)
            .into_iter()
            .filter(|&i| self.tail_rule(i) && !self.finite.contains(&i))
            .collect()
    }

    pub fn is_infinite(&self) -> bool {
        !self.pos.is_empty() || !self.neg.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        !self.is_infinite() && self.finite.is_empty()
    }

    /// Members up to `|i| <= n`, ascending.
    pub fn members_within(&self, n: u64) -> Vec<i64> {
        self.universe.window(n).into_iter().filter(|&i| self.contains(i)).collect()
    }

    fn combine(&self, other: &IndexPattern, op: BoolOp) -> Result<IndexPattern> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        let m = self.modulus.lcm(&other.modulus);
        let n = self.threshold.max(other.threshold);
        let f = |a: bool, b: bool| match op {
            BoolOp::Union => a || b,
            BoolOp::Intersect => a && b,
            BoolOp::Minus => a && !b,
        };
        // Representatives beyond n stand for their whole residue class.
        let k = (n / m + 2) as i64 * m as i64;
        Ok(IndexPattern::build(
            &self.universe,
            m,
            n,
            |r| f(self.contains(k + r as i64), other.contains(k + r as i64)),
            |r| f(self.contains(r as i64 - k), other.contains(r as i64 - k)),
            |i| f(self.contains(i), other.contains(i)),
        ))
    }

    pub fn union(&self, other: &IndexPattern) -> Result<IndexPattern> {
        self.combine(other, BoolOp::Union)
    }

    pub fn intersect(&self, other: &IndexPattern) -> Result<IndexPattern> {
        self.combine(other, BoolOp::Intersect)
    }

    pub fn minus(&self, other: &IndexPattern) -> Result<IndexPattern> {
        self.combine(other, BoolOp::Minus)
    }

    /// Complement within the universe.
    pub fn complement(&self) -> IndexPattern {
        IndexPattern::all(&self.universe).minus(self).expect("same universe")
    }

    fn canonical(mut self) -> Self {
        let m = self.modulus;
        for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
            let ok = |set: &BTreeSet<u64>| (0..m).all(|r| set.contains(&r) == set.contains(&(r % d)));
            if ok(&self.pos) && ok(&self.neg) {
                self.pos = self.pos.iter().copied().filter(|&r| r < d).collect();
                self.neg = self.neg.iter().copied().filter(|&r| r < d).collect();
                self.modulus = d;
                break;
            }
        }
        let floor = self.universe.min_threshold();
        while self.threshold > floor {
            let n = self.threshold as i64;
            let agrees = |i: i64| !self.universe.contains(i) || self.finite.contains(&i) == self.tail_rule(i);
            if agrees(n) && agrees(-n) {
                self.finite.remove(&n);
                self.finite.remove(&-n);
                self.threshold -= 1;
            } else {
                break;
            }
        }
        self
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}} mod {}", list(&self.pos), self.modulus)?;
        if self.universe.two_sided() {
            write!(f, " / neg {{{}}}", list(&self.neg))?;
        }
        let fin: Vec<String> = self.finite.iter().map(|i| i.to_string()).collect();
        write!(f, " beyond {} with {{{}}}", self.threshold, fin.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos() -> Universe {
        Universe::new(UniverseKind::Positive)
    }

    #[test]
    fn odd_from_three() {
        let u = pos();
        let odd = IndexPattern::residues(&u, 2, &[1]).unwrap();
        let p = odd.intersect(&IndexPattern::at_least(&u, 3)).unwrap();
        for i in 1..50 {
            assert_eq!(p.contains(i), i % 2 == 1 && i >= 3, "{i}");
        }
        assert_eq!(p.modulus(), 2);
    }

    #[test]
    fn complement_of_evens() {
        let u = pos();
        let even = IndexPattern::residues(&u, 2, &[0]).unwrap();
        assert_eq!(even.complement(), IndexPattern::residues(&u, 2, &[1]).unwrap());
    }

    #[test]
    fn residue_union_mod_five() {
        let u = pos();
        let a = IndexPattern::residues(&u, 5, &[1]).unwrap();
        let b = IndexPattern::residues(&u, 5, &[2]).unwrap();
        let c = a.union(&b).unwrap();
        assert_eq!(c.modulus(), 5);
        assert_eq!(c.residues_pos().len(), 2);
        assert!(a.intersect(&b).unwrap().is_empty());
    }

    #[test]
    fn canonical_modulus_shrinks() {
        let u = pos();
        let p = IndexPattern::residues(&u, 40, &[1, 6, 11, 16, 21, 26, 31, 36]).unwrap();
        assert_eq!(p, IndexPattern::residues(&u, 5, &[1]).unwrap());
    }

    #[test]
    fn two_sided_halves() {
        let u = Universe::new(UniverseKind::Integers);
        let neg = IndexPattern::at_most(&u, -1);
        assert!(neg.contains(-7) && !neg.contains(0) && !neg.contains(3));
        let all = neg.union(&IndexPattern::at_least(&u, 0)).unwrap();
        assert_eq!(all, IndexPattern::all(&u));
    }

    #[test]
    fn universe_exclusions_respected() {
        let u = Universe::with_excluded(UniverseKind::Nonzero, [1, -1]);
        let p = IndexPattern::all(&u);
        assert!(!p.contains(1) && !p.contains(-1) && !p.contains(0) && p.contains(2));
        assert_eq!(p.threshold(), 1);
    }

    #[test]
    fn added_and_removed() {
        let u = pos();
        let odd = IndexPattern::residues(&u, 2, &[1]).unwrap();
        let p = odd
            .minus(&IndexPattern::finite_set(&u, [3]))
            .unwrap()
            .union(&IndexPattern::finite_set(&u, [4]))
            .unwrap();
        assert_eq!(p.added(), BTreeSet::from([4]));
        assert_eq!(p.removed(), BTreeSet::from([3]));
    }

    #[test]
    fn negative_residues_on_two_sided() {
        let u = Universe::new(UniverseKind::Integers);
        let p = IndexPattern::residues(&u, 3, &[1]).unwrap();
        for i in -30..30 {
            assert_eq!(p.contains(i), i.rem_euclid(3) == 1, "{i}");
        }
    }
}
