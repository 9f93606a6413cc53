use heis_coupling::estimators::{
    a_p_constant, empirical_wasserstein, excursion_functionals, excursion_moment_from, fit_log_model,
    fit_power_law, hungarian, jackknife_mean_stderr, ks_one_sample, ks_two_sample, mean, norm_cdf,
    rejection_excursion_functionals, ExcursionConfig, MomentEstimate,
};
use heis_coupling::estimators::quadrature::adaptive_simpson;
use heis_coupling::rng::path_rng;
use rand::Rng;
use rand_distr::StandardNormal;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn assignment_matches_brute_force() {
    let mut rng = path_rng(1, 0);
    for instance in 0..100 {
        let n = 1 + instance % 6;
        let a: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
        let b: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
        let d = |x: &[f64; 2], y: &[f64; 2]| ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
        for p in [0.5, 1.0, 2.0] {
            let brute = permutations(n)
                .iter()
                .map(|s| (0..n).map(|i| d(&a[i], &b[s[i]]).powf(p)).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            let got = empirical_wasserstein(&a, &b, p, d).unwrap();
            let want = (brute / n as f64).powf(1.0 / p);
            assert!((got - want).abs() < 1e-12 * (1.0 + want), "n={n} p={p}: {got} vs {want}");
        }
    }
}

#[test]
fn hungarian_returns_a_permutation_achieving_the_total() {
    let mut rng = path_rng(2, 0);
    let n = 40;
    let cost: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
    let (col, total) = hungarian(&cost, n).unwrap();
    let mut seen = col.clone();
    seen.sort_unstable();
    assert_eq!(seen, (0..n).collect::<Vec<_>>());
    let sum: f64 = (0..n).map(|i| cost[i * n + col[i]]).sum();
    assert!((sum - total).abs() < 1e-12);
}

#[test]
fn convex_cost_in_one_dimension_is_sorted_matching() {
    let mut rng = path_rng(3, 0);
    let mut a: Vec<f64> = (0..60).map(|_| rng.sample(StandardNormal)).collect();
    let mut b: Vec<f64> = (0..60).map(|_| 2.0 * rng.gen::<f64>()).collect();
    let w2 = empirical_wasserstein(&a, &b, 2.0, |x, y| (x - y).abs()).unwrap();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let sorted = (a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / 60.0).sqrt();
    assert!((w2 - sorted).abs() < 1e-12);
}

#[test]
fn a_p_closed_form_matches_quadrature() {
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for k in 1..=9 {
        let p = k as f64 / 10.0;
        // q solves P(|G| ≤ q) = p; bisect on the CDF so the oracle does not
        // share the inverse used by the closed form.
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 2.0 * norm_cdf(mid) - 1.0 < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = 0.5 * (lo + hi);
        let quad = 2.0 * adaptive_simpson(|x| x * phi(x), 0.0, q, 1e-14);
        assert!((a_p_constant(p).unwrap() - quad).abs() < 1e-8, "p={p}");
    }
}

#[test]
fn ks_accepts_same_law_and_rejects_shift() {
    let mut rng = path_rng(4, 0);
    let a: Vec<f64> = (0..3000).map(|_| rng.sample(StandardNormal)).collect();
    let b: Vec<f64> = (0..3000).map(|_| rng.sample(StandardNormal)).collect();
    assert!(ks_two_sample(&a, &b).p_value > 1e-3);
    assert!(ks_one_sample(&a, norm_cdf).p_value > 1e-3);
    let shifted: Vec<f64> = b.iter().map(|x| x + 0.3).collect();
    assert!(ks_two_sample(&a, &shifted).p_value < 1e-6);
}

fn series(f: impl Fn(f64) -> f64) -> Vec<MomentEstimate> {
    (0..8)
        .map(|k| {
            let t = 10f64 * 2f64.powi(k);
            MomentEstimate { time: t, p: 1.0, estimate: f(t), stderr: 0.0, n_paths: 1 }
        })
        .collect()
}

#[test]
fn fits_recover_their_own_models() {
    let pl = fit_power_law(&series(|t| 3.0 * t.powf(0.37)), (1.0, 1e4)).unwrap();
    assert!((pl.exponent - 0.37).abs() < 1e-12);
    assert!(pl.residual_ss < 1e-20);
    let lg = fit_log_model(&series(|t| 2.0 + 0.5 * t.ln()), (1.0, 1e4)).unwrap();
    assert!((lg.b - 0.5).abs() < 1e-10 && lg.residual_ss < 1e-20);
    let pl_on_log = fit_power_law(&series(|t| 2.0 + 0.5 * t.ln()), (1.0, 1e4)).unwrap();
    assert!(lg.residual_ss < pl_on_log.residual_ss);
}

#[test]
fn excursion_square_integral_has_mean_one_half() {
    // E e_s² = 3s(1 − s) for the normalized excursion, so E∫e² = 1/2.
    let v = excursion_functionals(&ExcursionConfig { n_samples: 20_000, m_steps: 256, seed: 5 });
    let (m, se) = (mean(&v), jackknife_mean_stderr(&v));
    assert!((m - 0.5).abs() < 4.0 * se + 0.5 / 256.0, "{m} ± {se}");
}

#[test]
fn excursion_bessel_sampler_matches_rejection_sampler() {
    let bessel = excursion_functionals(&ExcursionConfig { n_samples: 20_000, m_steps: 512, seed: 6 });
    let coarse = rejection_excursion_functionals(20_000, 64, 7);
    let fine = rejection_excursion_functionals(20_000, 256, 8);
    for p in [0.5, 1.0, 2.0] {
        let (b, bse) = excursion_moment_from(&bessel, p);
        let (c, cse) = excursion_moment_from(&coarse, p);
        let (f, fse) = excursion_moment_from(&fine, p);
        // Discrete conditioning bias is O(m^{-1/2}); extrapolate it away.
        let rich = 2.0 * f - c;
        let se = (bse * bse + 4.0 * fse * fse + cse * cse).sqrt();
        assert!((rich - b).abs() < 4.0 * se + 0.01 * b, "p={p}: {rich} vs {b} ± {se}");
    }
}
