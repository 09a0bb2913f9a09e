use super::*;
use crate::kernel::q;
use crate::pattern::{Universe, UniverseKind};
use crate::space::PairingKind;

fn positive() -> Universe {
    Universe::new(UniverseKind::Positive)
}

/// Dual pair over positive indices with a left special `v` pairing to 1 with every `v*_j`.
fn iffgl() -> Space {
    let mut s = SpaceSpec::dual_pair("V", "Vstar", positive());
    let v = s.add_special(Side::Left, "v").unwrap();
    s.push_row(Side::Left, v, IndexPattern::all(s.universe()), q(1)).unwrap();
    Arc::new(s)
}

fn standard() -> Space {
    Arc::new(SpaceSpec::dual_pair("V", "Vstar", positive()))
}

fn residues(s: &Space, m: u64, r: &[i64]) -> IndexPattern {
    IndexPattern::residues(s.universe(), m, r).unwrap()
}

fn from(s: &Space, p: IndexPattern, t: i64) -> IndexPattern {
    p.intersect(&IndexPattern::at_least(s.universe(), t)).unwrap()
}

fn e(side: Side, i: i64) -> Vector {
    Vector::regular(side, i)
}

#[test]
fn odd_span_membership() {
    let s = standard();
    let x1 = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[1])).unwrap();
    assert!(x1.contains(&e(Side::Left, 3).minus(&e(Side::Left, 5))).unwrap());
    assert!(x1.contains(&e(Side::Left, 3).plus(&e(Side::Left, 5))).unwrap());
    assert!(!x1.contains(&e(Side::Left, 4)).unwrap());
}

#[test]
fn difference_family_membership() {
    let s = standard();
    // span{v_3 - v_i : i >= 4}: coefficient sum zero
    let fam = TailFamily {
        pattern: IndexPattern::at_least(s.universe(), 4),
        anchor: e(Side::Left, 3),
        lead: q(-1),
        mirror: q(0),
    };
    let x = Subspace::span(&s, Side::Left, &[], &[fam]).unwrap();
    assert!(x.contains(&e(Side::Left, 3).minus(&e(Side::Left, 9))).unwrap());
    assert!(x.contains(&e(Side::Left, 7).minus(&e(Side::Left, 9))).unwrap());
    assert!(!x.contains(&e(Side::Left, 3).plus(&e(Side::Left, 5))).unwrap());
    assert!(!x.contains(&e(Side::Left, 9)).unwrap());
    assert_eq!(x.perp().dim(), QuotientDim::Finite(2));
}

#[test]
fn one_block_perps() {
    let s = standard();
    let fam = TailFamily::new(IndexPattern::at_least(s.universe(), 2), e(Side::Left, 1));
    let x = Subspace::span(&s, Side::Left, &[], &[fam]).unwrap();
    assert!(x.perp().is_zero());
    let y = Subspace::coordinate(&s, Side::Right, &IndexPattern::at_least(s.universe(), 2)).unwrap();
    let yp = y.perp();
    assert_eq!(yp, Subspace::from_vectors(&s, Side::Left, &[e(Side::Left, 1)]).unwrap());
    assert_eq!(yp.to_string(), "span{V[1]}");
}

#[test]
fn closure_of_full_regular_part_is_everything() {
    let s = iffgl();
    let x1 = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[1])).unwrap();
    let x2 = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[0])).unwrap();
    let sum = x1.sum(&x2).unwrap();
    assert_ne!(sum, Subspace::full(&s, Side::Left));
    assert_eq!(sum.closure(), Subspace::full(&s, Side::Left));
    assert_eq!(Subspace::full(&s, Side::Left).quotient_dim(&sum).unwrap(), QuotientDim::Finite(1));
    // X1 is closed: its perp is the even coordinates of V*, whose perp is X1 again
    assert!(x1.is_closed());
}

#[test]
fn refine_preserves_membership() {
    let s = iffgl();
    let x1 = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[1])).unwrap();
    let r = x1.refine(Frame::new(7, 6));
    assert_eq!(r, x1);
    for i in 1..30 {
        let v = e(Side::Left, i);
        assert_eq!(r.contains(&v).unwrap(), i % 2 == 1, "{i}");
    }
}

#[test]
fn intersection_and_quotient() {
    let s = standard();
    let a = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[1])).unwrap();
    let b = Subspace::coordinate(&s, Side::Left, &residues(&s, 3, &[0])).unwrap();
    let c = a.intersect(&b).unwrap();
    assert_eq!(c, Subspace::coordinate(&s, Side::Left, &residues(&s, 6, &[3])).unwrap());
    assert_eq!(a.quotient_dim(&c).unwrap(), QuotientDim::Infinite);
    assert!(matches!(c.quotient_dim(&a), Err(Error::PreconditionViolation(_))));
}

#[test]
fn complement_splits() {
    let s = iffgl();
    let x1 = Subspace::coordinate(&s, Side::Left, &residues(&s, 2, &[1])).unwrap();
    let full = Subspace::full(&s, Side::Left);
    let c = x1.complement_in(&full).unwrap();
    assert!(x1.intersect(&c).unwrap().is_zero());
    assert_eq!(x1.sum(&c).unwrap(), full);
}

#[test]
fn selfdual_so_example() {
    for kind in [PairingKind::SelfdualSymmetric, PairingKind::SelfdualAntisymmetric] {
        let s: Space = Arc::new(SpaceSpec::selfdual("V", kind, Universe::new(UniverseKind::Nonzero)).unwrap());
        let u = s.universe();
        let pat = IndexPattern::all(u).minus(&IndexPattern::finite_set(u, [1, -1])).unwrap();
        let w = Subspace::span(&s, Side::Left, &[], &[TailFamily::new(pat.clone(), e(Side::Left, 1))]).unwrap();
        let wp = w.perp();
        let got = wp.perp().intersect(&wp).unwrap();
        assert_eq!(got, Subspace::from_vectors(&s, Side::Left, &[e(Side::Left, 1)]).unwrap());
        let cv1w = got.sum(&w).unwrap();
        let expect = Subspace::coordinate(&s, Side::Left, &IndexPattern::all(u).minus(&IndexPattern::finite_set(u, [-1])).unwrap()).unwrap();
        assert_eq!(cv1w, expect);
        assert!(cv1w.is_closed());
        assert!(got.is_isotropic().unwrap());
        assert!(cv1w.is_coisotropic().unwrap());
    }
}

#[test]
fn three_parabolic_quotients() {
    let s = iffgl();
    let l = Side::Left;
    let r = Side::Right;
    let x1 = Subspace::span(&s, l, &[], &[TailFamily::new(from(&s, residues(&s, 2, &[1]), 3), e(l, 1))]).unwrap();
    let x2 = Subspace::span(&s, l, &[], &[TailFamily::new(from(&s, residues(&s, 2, &[0]), 4), e(l, 1))]).unwrap();
    let y1 = Subspace::coordinate(&s, r, &from(&s, residues(&s, 2, &[1]), 3)).unwrap();
    let y2 = Subspace::span(&s, r, &[], &[TailFamily::new(from(&s, residues(&s, 2, &[0]), 4), e(r, 2))]).unwrap();
    assert!(Subspace::pairs_nondegenerately(&x1, &y1).unwrap());
    assert!(Subspace::pairs_nondegenerately(&x2, &y2).unwrap());
    let x12 = x1.sum(&x2).unwrap();
    let full = Subspace::full(&s, l);
    let zero = Subspace::zero(&s, l);
    let d = full.quotient_dim(&x12.closure()).unwrap();
    assert!(matches!(d, QuotientDim::Finite(_)));
    assert!(x12.closure().quotient_dim(&x12).unwrap().at_most(2));
    assert_eq!(x1.quotient_dim(&zero).unwrap(), QuotientDim::Infinite);
}

#[test]
fn printing_round_trips() {
    let s = iffgl();
    let l = Side::Left;
    let x = Subspace::span(&s, l, &[e(l, 2)], &[TailFamily::new(from(&s, residues(&s, 3, &[1]), 4), e(l, 1))]).unwrap();
    let g = x.generators();
    let back = Subspace::span(&s, l, &g.vectors, &g.families).unwrap();
    assert_eq!(back, x);
    let p = x.perp();
    let g = p.generators();
    assert_eq!(Subspace::span(&s, Side::Right, &g.vectors, &g.families).unwrap(), p);
}

#[test]
fn window_elements_of_differences() {
    let s = standard();
    let fam = TailFamily {
        pattern: IndexPattern::at_least(s.universe(), 2),
        anchor: e(Side::Left, 1),
        lead: q(-1),
        mirror: q(0),
    };
    let x = Subspace::span(&s, Side::Left, &[], &[fam]).unwrap();
    assert_eq!(x.window_elements(5).len(), 4);
    assert_eq!(x.window_elements(1).len(), 0);
}

#[test]
fn errors() {
    let s = standard();
    let fin = TailFamily::new(IndexPattern::finite_set(s.universe(), [1, 2]), Vector::zero(Side::Left));
    assert!(matches!(Subspace::span(&s, Side::Left, &[], &[fin]), Err(Error::InvalidPattern(_))));
    assert_eq!(
        Subspace::span(&s, Side::Left, &[e(Side::Right, 1)], &[]).unwrap_err(),
        Error::SideMismatch
    );
    let a = Subspace::zero(&s, Side::Left);
    assert_eq!(a.is_isotropic().unwrap_err(), Error::RequiresSelfdual);
}
