use heis_coupling::estimators::quadrature::adaptive_simpson;
use heis_coupling::estimators::{
    estimate_moment, fit_log_model, fit_power_law, hitting_cdf, hitting_density, Metric,
};
use heis_coupling::sim::{simulate_reflection_exact, ReflectionExactConfig};

use super::{window, RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const EXPONENTS: Schema = &[
    ("r0", "1"),
    ("z0", "0"),
    ("horizon", "1e4"),
    ("n_paths", "100000"),
    ("window", "100,1e4"),
    ("exponent_p1", "0.40,0.60"),
    ("exponent_p1_4", "-0.07,0.07"),
    ("sigmas", "3"),
];

pub const HITTING: Schema = &[("r0", "1"), ("horizon", "1e4"), ("n_paths", "100000"), ("ks_max", "0.01")];

fn range(p: &Params, key: &str) -> Result<(f64, f64), RunError> {
    match p.f64_list(key)?.as_slice() {
        [lo, hi] if lo <= hi => Ok((*lo, *hi)),
        _ => Err(p.invalid(key, "expected `lo, hi` with lo <= hi").into()),
    }
}

pub fn reflection_exponents(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (r0, z0) = (p.positive("r0")?, p.f64("z0")?);
    let cfg = ReflectionExactConfig::new(r0, z0, p.positive("horizon")?, p.count("n_paths")?, seed);
    let win = window(p, "window")?;
    let k = p.positive("sigmas")?;
    let ens = simulate_reflection_exact(&cfg)?;
    let mut out = Outcome::new(p.section());

    for (q, key) in [(1.0, "exponent_p1"), (0.25, "exponent_p1_4")] {
        let (lo, hi) = range(p, key)?;
        let fit = fit_power_law(&estimate_moment(&ens, q, Metric::AbsZ)?, win)?;
        out.check(format!("exponent[p={q}]"), fit.exponent, Some(fit.exponent_stderr), fit.exponent >= lo && fit.exponent <= hi);
        out.info(format!("power_fit_r_squared[p={q}]"), fit.r_squared, None);
    }

    let half = estimate_moment(&ens, 0.5, Metric::AbsZ)?;
    let power = fit_power_law(&half, win)?;
    let log = fit_log_model(&half, win)?;
    out.info("exponent[p=0.5]", power.exponent, Some(power.exponent_stderr));
    out.info("power_residual_ss[p=0.5]", power.residual_ss, None);
    out.info("log_residual_ss[p=0.5]", log.residual_ss, None);
    out.check("log_minus_power_residual_ss[p=0.5]", log.residual_ss - power.residual_ss, None, log.residual_ss < power.residual_ss);

    for m in estimate_moment(&ens, 1.0, Metric::R)? {
        let pass = (m.estimate - r0).abs() <= k * m.stderr;
        out.check(format!("mean_R[t={}]", m.time), m.estimate, Some(m.stderr), pass);
    }
    let absorbed = ens.paths.iter().filter(|p| p.absorption_time.is_some()).count();
    out.info("absorbed_fraction", absorbed as f64 / ens.n_paths() as f64, None);
    out.ensembles.push(("exact".into(), ens));
    Ok(out)
}

pub fn reflection_hitting(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let r0 = p.positive("r0")?;
    let horizon = p.positive("horizon")?;
    let mut cfg = ReflectionExactConfig::new(r0, 0.0, horizon, p.count("n_paths")?, seed);
    cfg.checkpoints = vec![0.0, horizon];
    let ens = simulate_reflection_exact(&cfg)?;
    let mut out = Outcome::new(p.section());

    // The closed-form CDF must agree with the integrated density.
    let mut quad_err = 0.0f64;
    for u in [0.01, 0.1, 1.0, 10.0, 100.0] {
        // Substitute u = w² to tame the singular-looking start.
        let density = |w: f64| if w > 0.0 { 2.0 * w * hitting_density(w * w, r0).unwrap_or(0.0) } else { 0.0 };
        let integral = adaptive_simpson(density, 0.0, f64::sqrt(u), 1e-13);
        quad_err = quad_err.max((integral - hitting_cdf(u, r0)?).abs());
    }
    out.check("cdf_vs_integrated_density_max_error", quad_err, None, quad_err < 1e-8);

    let n = ens.n_paths() as f64;
    let mut taus: Vec<f64> = ens.paths.iter().filter_map(|p| p.absorption_time).collect();
    taus.sort_by(f64::total_cmp);
    let mut d = 0.0f64;
    for (i, &tau) in taus.iter().enumerate() {
        let f = hitting_cdf(tau, r0)?;
        d = d.max((i as f64 / n - f).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d = d.max((taus.len() as f64 / n - hitting_cdf(horizon, r0)?).abs());
    let ks_max = p.positive("ks_max")?;
    out.check("ks_distance", d, None, d < ks_max);
    out.info("absorbed_fraction", taus.len() as f64 / n, None);
    out.info("expected_absorbed_fraction", hitting_cdf(horizon, r0)?, None);
    out.ensembles.push(("exact".into(), ens));
    Ok(out)
}
