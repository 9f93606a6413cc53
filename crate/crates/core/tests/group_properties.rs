use heis_coupling::group::{dilate, quasi_distance, HeisPoint, Unitary};
use heis_coupling::tolerances::{close_rel, ALGEBRA_REL};
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = HeisPoint> {
    (prop::collection::vec(-10.0f64..10.0, 2 * n), -10.0f64..10.0)
        .prop_map(|(h, z)| HeisPoint::new(h, z).unwrap())
}

fn triple() -> impl Strategy<Value = (HeisPoint, HeisPoint, HeisPoint)> {
    (1usize..=3).prop_flat_map(|n| (point(n), point(n), point(n)))
}

fn assert_close(a: &HeisPoint, b: &HeisPoint) {
    for (x, y) in a.horizontal().iter().zip(b.horizontal()) {
        assert!(close_rel(*x, *y, ALGEBRA_REL), "{a:?} vs {b:?}");
    }
    assert!(close_rel(a.vertical(), b.vertical(), ALGEBRA_REL), "{a:?} vs {b:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn associativity((a, b, c) in triple()) {
        assert_close(&a.mul(&b).unwrap().mul(&c).unwrap(), &a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn inverse_is_two_sided_and_involutive((a, _, _) in triple()) {
        let e = HeisPoint::identity(a.n());
        assert_close(&a.mul(&a.inverse()).unwrap(), &e);
        assert_close(&a.inverse().mul(&a).unwrap(), &e);
        prop_assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn left_invariance((p, a, b) in triple()) {
        let d = quasi_distance(&a, &b).unwrap();
        let dp = quasi_distance(&p.mul(&a).unwrap(), &p.mul(&b).unwrap()).unwrap();
        prop_assert!(close_rel(d, dp, ALGEBRA_REL));
    }

    #[test]
    fn dilation_is_automorphism_and_scales_distance((a, b, _) in triple(), l in 0.01f64..20.0) {
        let lhs = dilate(l, &a.mul(&b).unwrap()).unwrap();
        let rhs = dilate(l, &a).unwrap().mul(&dilate(l, &b).unwrap()).unwrap();
        assert_close(&lhs, &rhs);
        let d = quasi_distance(&dilate(l, &a).unwrap(), &dilate(l, &b).unwrap()).unwrap();
        prop_assert!(close_rel(d, l * quasi_distance(&a, &b).unwrap(), ALGEBRA_REL));
        prop_assert!(close_rel(dilate(l, &a).unwrap().quasinorm(), l * a.quasinorm(), ALGEBRA_REL));
    }

    #[test]
    fn rotation_isometry((a, b, _) in triple(), theta in -10.0f64..10.0) {
        let d = quasi_distance(&a.rotate(theta), &b.rotate(theta)).unwrap();
        prop_assert!(close_rel(d, quasi_distance(&a, &b).unwrap(), ALGEBRA_REL));
        prop_assert!(close_rel(a.rotate(theta).quasinorm(), a.quasinorm(), ALGEBRA_REL));
        assert_close(&a.mul(&b).unwrap().rotate(theta), &a.rotate(theta).mul(&b.rotate(theta)).unwrap());
    }

    #[test]
    fn aligning_unitary_is_automorphism((a, b, c) in triple()) {
        let u = Unitary::aligning(c.horizontal());
        assert_close(&u.apply(&a.mul(&b).unwrap()), &u.apply(&a).mul(&u.apply(&b)).unwrap());
        let d = quasi_distance(&u.apply(&a), &u.apply(&b)).unwrap();
        prop_assert!(close_rel(d, quasi_distance(&a, &b).unwrap(), 1e-10));
    }
}
