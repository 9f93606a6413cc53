use heis_coupling::coupling::{change_basis, Basis, CouplingMatrix, Frame, StrategyPolicy, PolicyInput};
use heis_coupling::tolerances::MATRIX_ABS;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// A valid coupling matrix: random matrix scaled so its largest singular
/// value is at most one.
fn valid_j(n: usize) -> impl Strategy<Value = CouplingMatrix> {
    (prop::collection::vec(-1.0f64..1.0, 4 * n * n), 0.0f64..=1.0).prop_map(move |(v, scale)| {
        let m = DMatrix::from_row_slice(2 * n, 2 * n, &v);
        let s = m.clone().singular_values().max();
        let m = if s > 0.0 { m * (scale / s) } else { m };
        CouplingMatrix::new(m, Basis::Canonical).unwrap()
    })
}

fn frame(n: usize) -> impl Strategy<Value = Frame> {
    (prop::collection::vec(-5.0f64..5.0, 2 * n), prop::collection::vec(-5.0f64..5.0, 2 * n))
        .prop_filter("distinct", |(b, c)| b.iter().zip(c).any(|(x, y)| (x - y).abs() > 1e-3))
        .prop_map(|(b, c)| Frame::new(&b, &c).unwrap())
}

fn pair() -> impl Strategy<Value = (CouplingMatrix, Frame)> {
    (1usize..=3).prop_flat_map(|n| (valid_j(n), frame(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn trace_and_antisymmetry_invariance((j, f) in pair()) {
        let k = change_basis(&j, &f).unwrap();
        prop_assert!((k.trace() - j.trace()).abs() < MATRIX_ABS);
        if j.n() == 1 {
            prop_assert!(((k.at(1, 2) - k.at(2, 1)) - (j.at(1, 2) - j.at(2, 1))).abs() < MATRIX_ABS);
        }
        prop_assert!(k.validate().valid);
    }

    #[test]
    fn jhat_completes_identity((j, _) in pair()) {
        let jh = j.complete_jhat().unwrap();
        let d = j.dim();
        let lhs = &jh * jh.transpose();
        let rhs = DMatrix::<f64>::identity(d, d) - j.entries() * j.entries().transpose();
        prop_assert!((lhs - rhs).iter().all(|v| v.abs() < MATRIX_ABS));
        prop_assert!((&jh - jh.transpose()).iter().all(|v| v.abs() < MATRIX_ABS));
        prop_assert!(jh.clone().symmetric_eigen().eigenvalues.iter().all(|l| *l > -MATRIX_ABS));
    }

    #[test]
    fn validate_agrees_with_singular_values(v in prop::collection::vec(-1.5f64..1.5, 4)) {
        let j = CouplingMatrix::from_rows(2, &v, Basis::Canonical).unwrap();
        let s = j.entries().clone().singular_values().max();
        prop_assert_eq!(j.validate().valid, s <= 1.0 + 1e-10);
        if j.validate().valid {
            prop_assert!(j.entries().iter().all(|x| x.abs() <= 1.0 + 1e-10));
        }
    }

    #[test]
    fn frames_are_direct_orthonormal(f in (1usize..=4).prop_flat_map(frame)) {
        let q = f.q();
        let d = q.nrows();
        prop_assert!((q.transpose() * q - DMatrix::<f64>::identity(d, d)).iter().all(|v| v.abs() < MATRIX_ABS));
        prop_assert!((q.determinant() - 1.0).abs() < MATRIX_ABS);
        // e₂ is e₁ rotated by +π/2 in every pair
        for i in 0..d / 2 {
            prop_assert!((q[(2 * i, 1)] + q[(2 * i + 1, 0)]).abs() < 1e-12);
            prop_assert!((q[(2 * i + 1, 1)] - q[(2 * i, 0)]).abs() < 1e-12);
        }
    }

    #[test]
    fn emitted_matrices_valid_with_nonnegative_trace_defect(
        r2 in 0.0f64..5.0, z in -5.0f64..5.0, steps in prop::collection::vec((0.0f64..5.0, -5.0f64..5.0), 1..20)
    ) {
        for policy in [
            StrategyPolicy::synchronous(1),
            StrategyPolicy::reflection(2),
            StrategyPolicy::perverse(1),
            StrategyPolicy::kendall(1, 1.0, 0.5).unwrap(),
        ] {
            let mut mem = policy.initial_memory(PolicyInput { t: 0.0, r2, z });
            for &(r2, z) in &steps {
                let k = &policy.step(PolicyInput { t: 0.0, r2, z }, &mut mem).k;
                prop_assert!(k.validate().valid);
                prop_assert!(k.dim() as f64 - k.trace() >= 0.0);
            }
        }
    }
}
