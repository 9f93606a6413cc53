use heis_coupling::estimators::quadrature::adaptive_simpson;
use heis_coupling::estimators::{
    a_p_constant, excursion_functionals, excursion_moment_from, frozen_half_martingale, jackknife_mean_stderr,
    martingale_lower_bound_check, mean, norm_cdf, rejection_excursion_functionals, standard_bm_martingale,
    ExcursionConfig, MartingaleSample,
};
use heis_coupling::rng::derive_seed;

use super::{RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const MG: Schema = &[
    ("ps", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"),
    ("n_paths", "100000"),
    ("h", "1"),
    ("beta", "1"),
    ("m_steps", "64"),
    ("tol", "1e-8"),
];

pub const EXCURSION: Schema = &[
    ("n_samples", "20000"),
    ("m_steps", "2048"),
    ("ps", "0.5,1,2"),
    ("rejection_steps", "64,256"),
    ("sigmas", "3"),
    ("rel_bias", "0.01"),
];

/// `a_p` from its defining integral: the central-mass quantile by bisection
/// on the normal CDF, then `2 ∫₀^q x φ(x) dx`.
fn a_p_by_quadrature(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 2.0 * norm_cdf(mid) - 1.0 < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let phi = |x: f64| x * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    2.0 * adaptive_simpson(phi, 0.0, q, 1e-14)
}

pub fn mg_lemma(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let ps = p.f64_list("ps")?;
    if ps.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(p.invalid("ps", "every p must lie in (0, 1)").into());
    }
    let (n, h, beta) = (p.count("n_paths")?, p.positive("h")?, p.f64("beta")?);
    let m = p.count("m_steps")?;
    let tol = p.positive("tol")?;
    let mut out = Outcome::new(p.section());

    let mut prev = 0.0;
    let abs_mean = (2.0 / std::f64::consts::PI).sqrt();
    for &q in &ps {
        let closed = a_p_constant(q)?;
        let err = (closed - a_p_by_quadrature(q)).abs();
        out.check(format!("a_p_quadrature_error[p={q}]"), err, None, err <= tol);
        out.check(format!("a_p_below_mean_abs[p={q}]"), closed, None, closed > prev && closed < abs_mean);
        prev = closed;
    }

    let bm = standard_bm_martingale(n, h, m, derive_seed(seed, 0));
    let frozen = frozen_half_martingale(n, h, m, derive_seed(seed, 1));
    let mut run = |label: &str, samples: &[MartingaleSample], q: f64| -> Result<(), RunError> {
        let c = martingale_lower_bound_check(samples, beta, q)?;
        out.info(format!("bound[{label}:p={q}]"), c.bound, None);
        out.info(format!("bracket_probability[{label}:p={q}]"), c.prob_bracket, None);
        out.check(format!("mean_abs[{label}:p={q}]"), c.mean_abs, Some(c.stderr), c.pass);
        Ok(())
    };
    for &q in &ps {
        run("brownian", &bm, q)?;
    }
    // Half the paths never move, so the precondition holds only for p ≤ 1/2.
    let frozen_share = frozen.iter().filter(|s| s.bracket >= beta).count() as f64 / n as f64;
    for &q in ps.iter().filter(|&&q| q <= frozen_share) {
        run("frozen-half", &frozen, q)?;
    }
    Ok(out)
}

pub fn excursion_moments(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let cfg = ExcursionConfig { n_samples: p.count("n_samples")?, m_steps: p.count("m_steps")?, seed };
    let ks = p.positive("sigmas")?;
    let rel_bias = p.positive("rel_bias")?;
    let steps = p.f64_list("rejection_steps")?;
    let (coarse_m, fine_m) = match steps.as_slice() {
        [c, f] if *c >= 2.0 && f > c => (*c as usize, *f as usize),
        _ => return Err(p.invalid("rejection_steps", "expected `coarse, fine` with 2 <= coarse < fine").into()),
    };
    let bessel = excursion_functionals(&cfg);
    let mut out = Outcome::new(p.section());
    let (m, se) = (mean(&bessel), jackknife_mean_stderr(&bessel));
    out.check("mean_square_integral", m, Some(se), (m - 0.5).abs() <= ks * se);

    let coarse = rejection_excursion_functionals(cfg.n_samples, coarse_m, derive_seed(seed, 1));
    let fine = rejection_excursion_functionals(cfg.n_samples, fine_m, derive_seed(seed, 2));
    // The walk-bridge bias decays like m^{-1/2}; two levels cancel it.
    let w = (fine_m as f64 / coarse_m as f64).sqrt();
    for q in p.positive_list("ps")? {
        let (b, bse) = excursion_moment_from(&bessel, q);
        let (c, cse) = excursion_moment_from(&coarse, q);
        let (f, fse) = excursion_moment_from(&fine, q);
        let rich = (w * f - c) / (w - 1.0);
        let rse = ((w * fse).powi(2) + cse * cse).sqrt() / (w - 1.0);
        out.info(format!("moment_rejection[p={q}]"), rich, Some(rse));
        let se = (bse * bse + rse * rse).sqrt();
        out.check(format!("moment[p={q}]"), b, Some(bse), (rich - b).abs() <= ks * se + rel_bias * b);
    }
    Ok(out)
}
