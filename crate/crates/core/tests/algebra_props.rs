use levi_core::kernel::{q, Matrix, Scalar};
use levi_core::operator::Operator;
use levi_core::pattern::{IndexPattern, Universe, UniverseKind};
use levi_core::random::{random_space, random_vector, rng};
use levi_core::space::{PairingKind, Side, SpaceSpec};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(move |rows| Matrix::from_rows(c, rows.into_iter().map(|row| row.into_iter().map(q).collect()).collect()))
    })
}

fn universe() -> impl Strategy<Value = Universe> {
    prop_oneof![
        Just(Universe::new(UniverseKind::Positive)),
        Just(Universe::new(UniverseKind::Nonzero)),
        Just(Universe::new(UniverseKind::Integers)),
        Just(Universe::with_excluded(UniverseKind::Positive, [2])),
    ]
}

/// Residue classes cut off at a threshold, then a few finite additions and removals.
fn pattern(u: Universe) -> impl Strategy<Value = IndexPattern> {
    (1u64..6, prop::collection::vec(any::<bool>(), 6), -6i64..6, prop::collection::vec(-12i64..12, 0..3), prop::collection::vec(-12i64..12, 0..3))
        .prop_map(move |(m, picks, t, add, remove)| {
            let res: Vec<i64> = (0..m as i64).filter(|&r| picks[r as usize]).collect();
            IndexPattern::residues(&u, m, &res)
                .and_then(|p| p.intersect(&IndexPattern::at_least(&u, t)))
                .and_then(|p| p.union(&IndexPattern::finite_set(&u, add.clone())))
                .and_then(|p| p.minus(&IndexPattern::finite_set(&u, remove.clone())))
                .unwrap()
        })
}

fn pattern_pair() -> impl Strategy<Value = (IndexPattern, IndexPattern)> {
    universe().prop_flat_map(|u| (pattern(u.clone()), pattern(u)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn rref_idempotent_and_rank_nullity(m in matrix()) {
        let (rank, ech, _) = m.rref();
        prop_assert_eq!(ech.rref().1, ech.clone());
        prop_assert_eq!(rank + m.kernel().len(), m.cols());
        for k in m.kernel() {
            prop_assert!(m.mul_vec(&k).iter().all(|x| *x == Scalar::from_integer(0.into())));
        }
    }

    #[test]
    fn solve_is_exact(m in matrix(), seed in prop::collection::vec(-3i64..=3, 6)) {
        let x0: Vec<Scalar> = seed.iter().take(m.cols()).map(|&v| q(v)).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn pattern_boolean_algebra((a, b) in pattern_pair()) {
        let bound = 10 * a.modulus().max(b.modulus()) as i64 * (a.threshold().max(b.threshold()) as i64 + 1);
        let (u, i, d) = (a.union(&b).unwrap(), a.intersect(&b).unwrap(), a.minus(&b).unwrap());
        let (ca, cb) = (a.complement(), b.complement());
        for k in -bound..=bound {
            prop_assert_eq!(u.contains(k), a.contains(k) || b.contains(k));
            prop_assert_eq!(i.contains(k), a.contains(k) && b.contains(k));
            prop_assert_eq!(d.contains(k), a.contains(k) && !b.contains(k));
            prop_assert_eq!(ca.contains(k), a.universe().contains(k) && !a.contains(k));
        }
        prop_assert_eq!(u.complement(), ca.intersect(&cb).unwrap());
        prop_assert_eq!(i.complement(), ca.union(&cb).unwrap());
        prop_assert_eq!(a.intersect(&u).unwrap(), a.clone());
        prop_assert_eq!(ca.complement(), a);
    }

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>(), a in -3i64..=3, b in -3i64..=3) {
        let mut r = rng(seed);
        let s = random_space(&mut r);
        let right = s.perp_side(Side::Left);
        let x = random_vector(&mut r, &s, Side::Left, 8);
        let y = random_vector(&mut r, &s, Side::Left, 8);
        let u = random_vector(&mut r, &s, right, 8);
        let lhs = s.pair(&x.scaled(&q(a)).plus(&y.scaled(&q(b))), &u).unwrap();
        let rhs = q(a) * s.pair(&x, &u).unwrap() + q(b) * s.pair(&y, &u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_space(&mut r);
        let right = s.perp_side(Side::Left);
        let mut op = || Operator::rank_one(&random_vector(&mut r, &s, Side::Left, 5), &random_vector(&mut r, &s, right, 5));
        let (x, y, z) = (op(), op(), op());
        let br = |a: &Operator, b: &Operator| Operator::bracket(&s, a, b);
        prop_assert!(br(&x, &y).plus(&br(&y, &x)).is_zero());
        let jacobi = br(&x, &br(&y, &z)).plus(&br(&y, &br(&z, &x))).plus(&br(&z, &br(&x, &y)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn lambda_and_sym_symmetries(seed in any::<u64>(), c in -3i64..=3) {
        let mut r = rng(seed);
        let kind = if seed % 2 == 0 { PairingKind::SelfdualSymmetric } else { PairingKind::SelfdualAntisymmetric };
        let s = SpaceSpec::selfdual("V", kind, Universe::new(UniverseKind::Nonzero)).unwrap();
        let w = random_vector(&mut r, &s, Side::Left, 5);
        let u = random_vector(&mut r, &s, Side::Left, 5);
        let wu = Operator::rank_one(&w, &u);
        let uw = Operator::rank_one(&u, &w);
        prop_assert!(wu.lambda(&s).unwrap().plus(&uw.lambda(&s).unwrap()).is_zero());
        prop_assert!(wu.sym(&s).unwrap().minus(&uw.sym(&s).unwrap()).is_zero());
        let sum = wu.scaled(&q(c)).plus(&uw);
        prop_assert_eq!(sum.lambda(&s).unwrap(), wu.lambda(&s).unwrap().scaled(&q(c)).plus(&uw.lambda(&s).unwrap()));
        prop_assert_eq!(sum.sym(&s).unwrap(), wu.sym(&s).unwrap().scaled(&q(c)).plus(&uw.sym(&s).unwrap()));
    }
}
