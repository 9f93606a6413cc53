use heis_coupling::estimators::{jackknife_mean_stderr, ks_two_sample, mean, skewness, variance};
use heis_coupling::estimators::quadrature::adaptive_simpson;
use heis_coupling::rng::path_rng;
use heis_coupling::sim::sample_heisenberg_bm;
use heis_coupling::static_coupling::{
    baseline_translation_couple, sample_levy_area_given_endpoint, static_couple, transport_cost_sqrt_1d,
    StaticCouplingConfig, StaticJointSample,
};
use heis_coupling::{quasi_distance, HeisPoint};
use rand::Rng;
use rand_distr::StandardNormal;

fn small(t: f64, n: usize, seed: u64) -> StaticCouplingConfig {
    StaticCouplingConfig { m_steps: 128, pool_size: 2048, m_bridge: 128, ..StaticCouplingConfig::new(t, n, seed) }
}

fn conditional_areas(b: [f64; 2], t: f64, n: usize, seed: u64) -> Vec<f64> {
    (0..n)
        .map(|i| sample_levy_area_given_endpoint(&b, t, 256, &mut path_rng(seed, i as u64)))
        .collect()
}

#[test]
fn conditional_area_moments() {
    // Var(Z | B_t = b) = t²/12 + t|b|²/12, symmetric in law.
    for (b, t) in [([0.0, 0.0], 1.0), ([1.0, 0.0], 1.0), ([0.6, -0.8], 4.0)] {
        let z = conditional_areas(b, t, 20_000, 1);
        let want = t * t / 12.0 + t * (b[0] * b[0] + b[1] * b[1]) / 12.0;
        let v = variance(&z);
        assert!((v - want).abs() < 4.0 * v * (2.0 / 20_000f64).sqrt() + want / 256.0, "{b:?}: {v} vs {want}");
        assert!(mean(&z).abs() < 4.0 * jackknife_mean_stderr(&z));
        let (sk, se) = skewness(&z);
        assert!(sk.abs() < 4.0 * se);
    }
}

#[test]
fn mixing_over_the_endpoint_gives_the_free_area() {
    let mut rng = path_rng(2, 0);
    let z: Vec<f64> = (0..20_000)
        .map(|_| {
            let b = [rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)];
            sample_levy_area_given_endpoint(&b, 1.0, 128, &mut rng)
        })
        .collect();
    let v = variance(&z);
    assert!((v - 0.25).abs() < 4.0 * 0.25 * (2.0 / 20_000f64).sqrt() * 1.5, "{v}");
}

#[test]
fn conditional_area_scales_with_time() {
    let one: Vec<f64> = conditional_areas([1.0, 0.0], 1.0, 5000, 3).iter().map(|z| 4.0 * z).collect();
    let four = conditional_areas([2.0, 0.0], 4.0, 5000, 4);
    assert!(ks_two_sample(&one, &four).p_value > 1e-3);
}

fn direct(start: &HeisPoint, t: f64, n: usize, seed: u64) -> Vec<HeisPoint> {
    (0..n).map(|i| sample_heisenberg_bm(start, t, 256, &mut path_rng(seed, i as u64))).collect()
}

fn coords(points: &[HeisPoint]) -> Vec<Vec<f64>> {
    let d = points[0].horizontal().len();
    let mut out: Vec<Vec<f64>> = (0..d).map(|k| points.iter().map(|p| p.horizontal()[k]).collect()).collect();
    out.push(points.iter().map(|p| p.vertical()).collect());
    out
}

fn check_marginals(a: &HeisPoint, ap: &HeisPoint, joint: &[StaticJointSample], t: f64) {
    let left: Vec<HeisPoint> = joint.iter().map(|s| s.left.clone()).collect();
    let right: Vec<HeisPoint> = joint.iter().map(|s| s.right.clone()).collect();
    for (got, start, seed) in [(left, a, 100), (right, ap, 200)] {
        let want = direct(start, t, joint.len(), seed);
        for (x, y) in coords(&got).iter().zip(coords(&want).iter()) {
            let ks = ks_two_sample(x, y);
            assert!(ks.p_value > 1e-3, "{ks:?}");
        }
    }
}

#[test]
fn static_coupling_has_the_right_marginals_in_h1() {
    let a = HeisPoint::h1(0.3, -0.2, 0.5);
    let ap = HeisPoint::h1(0.8, 0.4, -0.1);
    let joint = static_couple(&a, &ap, &small(1.0, 3000, 5)).unwrap();
    check_marginals(&a, &ap, &joint, 1.0);
    for s in &joint {
        for k in 0..2 {
            let gap = s.right.horizontal()[k] - s.left.horizontal()[k];
            assert!((gap - (ap.horizontal()[k] - a.horizontal()[k])).abs() < 1e-12);
        }
        assert!((s.cost - quasi_distance(&s.left, &s.right).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn static_coupling_has_the_right_marginals_in_h2() {
    let a = HeisPoint::new(vec![0.0, 0.1, 0.0, -0.3], 0.0).unwrap();
    let ap = HeisPoint::new(vec![0.5, 0.0, 0.2, 0.4], 0.7).unwrap();
    let joint = static_couple(&a, &ap, &small(1.0, 2000, 6)).unwrap();
    check_marginals(&a, &ap, &joint, 1.0);
}

#[test]
fn baseline_has_the_right_marginals_and_cost() {
    let a = HeisPoint::h1(0.0, 0.0, 0.0);
    let ap = HeisPoint::h1(0.5, 0.0, 0.0);
    let joint = baseline_translation_couple(&a, &ap, 1.0, 3000, 128, 7).unwrap();
    check_marginals(&a, &ap, &joint, 1.0);
    for s in &joint {
        let y = s.left.horizontal()[1];
        assert!((s.cost - (0.25 + (0.5 * y).abs()).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn static_beats_translation_for_close_starts() {
    let a = HeisPoint::h1(0.0, 0.0, 0.0);
    let x = 1e-2;
    let ap = HeisPoint::h1(x, 0.0, 0.0);
    let st: Vec<f64> = static_couple(&a, &ap, &small(1.0, 2000, 8)).unwrap().iter().map(|s| s.cost).collect();
    let bl: Vec<f64> =
        baseline_translation_couple(&a, &ap, 1.0, 2000, 128, 8).unwrap().iter().map(|s| s.cost).collect();
    // Cost is at least the horizontal gap, and the static plan is far below √x.
    assert!(st.iter().all(|&c| c >= x * (1.0 - 1e-12)));
    assert!(mean(&st) < 0.5 * mean(&bl), "{} vs {}", mean(&st), mean(&bl));
}

#[test]
fn static_cost_is_invariant_under_left_translation_and_rotation() {
    let a = HeisPoint::h1(0.2, 0.1, 0.0);
    let ap = HeisPoint::h1(0.5, -0.3, 0.2);
    let g = HeisPoint::h1(-1.0, 2.0, 0.3);
    let cfg = small(1.0, 200, 9);
    let base = static_couple(&a, &ap, &cfg).unwrap();
    let moved = static_couple(&g.mul(&a).unwrap(), &g.mul(&ap).unwrap(), &cfg).unwrap();
    let rotated = static_couple(&a.rotate(0.7), &ap.rotate(0.7), &cfg).unwrap();
    for ((s, m), r) in base.iter().zip(&moved).zip(&rotated) {
        assert!((s.cost - m.cost).abs() < 1e-9 * (1.0 + s.cost));
        assert!((s.cost - r.cost).abs() < 1e-9 * (1.0 + s.cost));
    }
}

#[test]
fn sqrt_transport_obeys_the_shift_bound() {
    // E cost ≤ s ∫|f′(x)|√|x| dx for the standard normal density f.
    let f_prime = |x: f64| x.abs() * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let bound_const = 2.0 * adaptive_simpson(|x| f_prime(x) * x.sqrt(), 0.0, 40.0, 1e-13);
    assert!((bound_const - 0.8600).abs() < 1e-3, "{bound_const}");
    let s = 1.0;
    let costs: Vec<f64> = (0..20)
        .map(|r| {
            let mut rng = path_rng(10, r);
            let x: Vec<f64> = (0..256).map(|_| rng.sample(StandardNormal)).collect();
            transport_cost_sqrt_1d(&x, s).unwrap()
        })
        .collect();
    assert!(mean(&costs) <= s * bound_const + 3.0 * jackknife_mean_stderr(&costs));
}
