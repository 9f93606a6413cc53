use heis_coupling::coupling::{Basis, CouplingMatrix, StrategyPolicy};
use heis_coupling::estimators::{jackknife_mean_stderr, ks_two_sample, mean, variance};
use heis_coupling::sim::{
    simulate_ensemble, simulate_reflection_exact, EnsembleConfig, PathEnsemble, ReflectionExactConfig, Scheme,
};
use heis_coupling::HeisPoint;

fn h1_config(policy: StrategyPolicy, r0: f64, z0: f64, t: f64, dt: f64, n: usize, seed: u64) -> EnsembleConfig {
    // B′ = (r0, 0), Z = z0 with the left point at the origin.
    EnsembleConfig::new(
        policy,
        HeisPoint::h1(0.0, 0.0, 0.0),
        HeisPoint::h1(r0, 0.0, -z0),
        t,
        dt,
        n,
        seed,
    )
    .with_checkpoints(vec![0.0, t / 2.0, t])
}

fn last(e: &PathEnsemble, f: fn(&heis_coupling::sim::CheckpointSample) -> f64) -> Vec<f64> {
    e.column(e.checkpoints.len() - 1, f)
}

#[test]
fn start_records_initial_state() {
    let e = simulate_ensemble(&h1_config(StrategyPolicy::synchronous(1), 1.5, 0.7, 1.0, 0.1, 3, 1)).unwrap();
    for p in &e.paths {
        assert!((p.samples[0].r2 - 2.25).abs() < 1e-12);
        assert!((p.samples[0].z - 0.7).abs() < 1e-12);
    }
}

#[test]
fn synchronous_keeps_r_and_spreads_z() {
    let (r0, t) = (1.5, 2.0);
    let e = simulate_ensemble(&h1_config(StrategyPolicy::synchronous(1), r0, 0.0, t, 1e-2, 4000, 2)).unwrap();
    for p in &e.paths {
        assert!(p.samples.iter().all(|s| (s.r2 - r0 * r0).abs() < 1e-9));
    }
    let z = last(&e, |s| s.z);
    let v = variance(&z);
    let se = v * (2.0 / z.len() as f64).sqrt();
    assert!((v - r0 * r0 * t).abs() < 4.0 * se, "{v}");
}

#[test]
fn perverse_is_deterministic_in_the_reduced_scheme() {
    let (r0, t, dt) = (1.0, 3.0, 1e-3);
    let cfg = h1_config(StrategyPolicy::perverse(1), r0, 0.4, t, dt, 20, 3).with_scheme(Scheme::Reduced);
    for p in &simulate_ensemble(&cfg).unwrap().paths {
        let s = p.samples[2];
        assert!((s.r2.sqrt() - (r0 * r0 + 4.0 * t).sqrt()).abs() < 5.0 * dt * t);
        assert_eq!(s.z, 0.4);
    }
}

#[test]
fn perverse_full_scheme_matches_in_mean() {
    // Euler increments of R² are 4hξ², exact only in expectation.
    let (r0, t) = (1.0, 2.0);
    let e = simulate_ensemble(&h1_config(StrategyPolicy::perverse(1), r0, 0.4, t, 1e-3, 2000, 3)).unwrap();
    let r2 = last(&e, |s| s.r2);
    assert!((mean(&r2) - r0 * r0 - 4.0 * t).abs() < 4.0 * jackknife_mean_stderr(&r2));
    // Z moves only through the O(h) cross term ½ω(ΔB, JΔB), which has mean zero.
    let z = last(&e, |s| s.z);
    assert!((mean(&z) - 0.4).abs() < 4.0 * jackknife_mean_stderr(&z));
    assert!(variance(&z).sqrt() < 0.1);
}

#[test]
fn reflection_distance_is_a_martingale_in_every_scheme() {
    let (r0, t) = (1.0, 2.0);
    let full = simulate_ensemble(&h1_config(StrategyPolicy::reflection(1), r0, 0.0, t, 2e-3, 3000, 4)).unwrap();
    let reduced = simulate_ensemble(
        &h1_config(StrategyPolicy::reflection(1), r0, 0.0, t, 2e-3, 3000, 5).with_scheme(Scheme::Reduced),
    )
    .unwrap();
    let mut cfg = ReflectionExactConfig::new(r0, 0.0, t, 20000, 6);
    cfg.checkpoints = vec![0.0, 1.0, t];
    let exact = simulate_reflection_exact(&cfg).unwrap();
    for e in [&full, &reduced, &exact] {
        let r = last(e, |s| s.r2.sqrt());
        let (m, se) = (mean(&r), jackknife_mean_stderr(&r));
        assert!((m - r0).abs() < 4.0 * se, "{} {m} ± {se}", e.scheme);
        assert!(e.paths.iter().any(|p| p.absorption_time.is_some()));
    }
}

#[test]
fn r2_compensator_identity() {
    // R² − R₀² − ∫2tr(I−K) is a martingale.
    for policy in [StrategyPolicy::reflection(1), StrategyPolicy::kendall(1, 1.0, 0.5).unwrap()] {
        let e = simulate_ensemble(&h1_config(policy, 1.0, 0.2, 1.0, 1e-3, 2000, 7)).unwrap();
        let m = last(&e, |s| s.r2 - 1.0 - s.trace_drift);
        let se = jackknife_mean_stderr(&m);
        assert!(mean(&m).abs() < 4.0 * se, "{} ± {se}", mean(&m));
    }
}

#[test]
fn z_quadratic_variation_matches_variance() {
    // Under reflection Z has no drift, so E Z_T² equals the expected bracket.
    let e = simulate_ensemble(&h1_config(StrategyPolicy::reflection(1), 1.0, 0.0, 1.0, 1e-3, 4000, 8)).unwrap();
    let z2 = last(&e, |s| s.z * s.z);
    let qv = last(&e, |s| s.qv);
    let diff: Vec<f64> = z2.iter().zip(&qv).map(|(a, b)| a - b).collect();
    assert!(mean(&diff).abs() < 4.0 * jackknife_mean_stderr(&diff));
    assert!(last(&e, |s| s.v).iter().all(|&v| v == 0.0));
}

#[test]
fn full_and_reduced_agree_for_a_rotation_coupling() {
    // A non-symmetric frame matrix exercises the sign of ρ and of the Z drift.
    let (c, s) = (0.6 * 0.8, 0.6 * 0.6);
    let k = CouplingMatrix::from_rows(2, &[c, -s, s, c], Basis::Frame).unwrap();
    let policy = StrategyPolicy::custom(k).unwrap();
    let base = h1_config(policy, 1.0, 0.0, 1.0, 2e-3, 4000, 9);
    let full = simulate_ensemble(&base).unwrap();
    let reduced = simulate_ensemble(&base.clone().with_scheme(Scheme::Reduced)).unwrap();
    for f in [|s: &heis_coupling::sim::CheckpointSample| s.r2, |s: &heis_coupling::sim::CheckpointSample| s.z] {
        let ks = ks_two_sample(&last(&full, f), &last(&reduced, f));
        assert!(ks.p_value > 1e-3, "{ks:?}");
    }
    let z = last(&full, |s| s.z);
    // E Z_T = ∫ ½(K₂₁ − K₁₂) dt ≠ 0 for this coupling.
    assert!((mean(&z) - s).abs() < 4.0 * jackknife_mean_stderr(&z), "{}", mean(&z));
}

#[test]
fn brownian_scaling_is_exact_pathwise() {
    let lam = 2.0;
    let a = simulate_ensemble(&h1_config(StrategyPolicy::reflection(1), 1.0, 0.3, 1.0, 1e-2, 50, 10)).unwrap();
    let b = simulate_ensemble(&h1_config(
        StrategyPolicy::reflection(1),
        lam,
        0.3 * lam * lam,
        lam * lam,
        1e-2 * lam * lam,
        50,
        10,
    ))
    .unwrap();
    for (p, q) in a.paths.iter().zip(&b.paths) {
        for (s, u) in p.samples.iter().zip(&q.samples) {
            assert!((u.r2 - lam * lam * s.r2).abs() < 1e-9 * (1.0 + u.r2));
            assert!((u.z - lam * lam * s.z).abs() < 1e-9 * (1.0 + u.z.abs()));
        }
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let cfg = h1_config(StrategyPolicy::kendall(1, 1.0, 0.5).unwrap(), 1.0, 0.1, 1.0, 1e-2, 64, 11);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate_ensemble(&cfg))
    };
    let one = run(1).unwrap();
    assert_eq!(one, run(3).unwrap());
    assert_eq!(one, run(8).unwrap());
}

#[test]
fn reduced_clamps_are_rare() {
    let e = simulate_ensemble(
        &h1_config(StrategyPolicy::reflection(1), 1.0, 0.0, 1.0, 1e-3, 500, 12).with_scheme(Scheme::Reduced),
    )
    .unwrap();
    assert!(e.clamp_fraction() < 1e-3, "{}", e.clamp_fraction());
}

#[test]
fn kendall_meets_in_h1() {
    let e = simulate_ensemble(&h1_config(StrategyPolicy::kendall(1, 1.0, 0.5).unwrap(), 1.0, 0.0, 10.0, 1e-2, 300, 13))
        .unwrap();
    assert!(e.success_fraction(10.0) > 0.2);
    assert!(e.paths.iter().all(|p| p.glue_gap.is_finite()));
}

#[test]
fn synchronous_in_h2_matches_closed_form() {
    let l = HeisPoint::new(vec![0.0; 4], 0.0).unwrap();
    let r = HeisPoint::new(vec![0.6, 0.0, 0.0, 0.8], 0.0).unwrap();
    let e = simulate_ensemble(
        &EnsembleConfig::new(StrategyPolicy::synchronous(2), l, r, 1.0, 1e-2, 3000, 14).with_checkpoints(vec![0.0, 1.0]),
    )
    .unwrap();
    let z = last(&e, |s| s.z);
    let v = variance(&z);
    assert!((v - 1.0).abs() < 4.0 * v * (2.0 / 3000f64).sqrt(), "{v}");
}
