use heis_coupling::estimators::{jackknife_mean_stderr, ks_two_sample, mean, KsResult};
use heis_coupling::rng::derive_seed;
use heis_coupling::sim::{simulate_ensemble, CheckpointSample, EnsembleConfig, PathEnsemble, Scheme};
use heis_coupling::tolerances::ALGEBRA_REL;
use heis_coupling::HeisPoint;

use super::{policy, RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const CONSISTENCY: Schema = &[
    ("strategies", "synchronous,reflection,perverse,kendall"),
    ("a", "0,0,0"),
    ("a_prime", "1,0,0"),
    ("horizon", "1"),
    ("dt", "1e-3"),
    ("n_paths", "10000"),
    ("kappa", "1"),
    ("epsilon", "0.5"),
    ("p_min", "0.001"),
    ("dt_study", "2,0.5"),
];

pub const CLOSED: Schema = &[
    ("r0", "1"),
    ("z0", "0.5"),
    ("horizon", "1"),
    ("dt", "1e-3"),
    ("n_paths", "10000"),
    ("sigmas", "3"),
];

pub const H2: Schema = &[
    ("a", "0,0,0,0,0"),
    ("a_prime", "0.6,0,0,0.8,0"),
    ("horizon", "1"),
    ("dt", "1e-3"),
    ("n_paths", "10000"),
    ("sigmas", "3"),
];

fn at_horizon(e: &PathEnsemble, f: impl Fn(&CheckpointSample) -> f64) -> Vec<f64> {
    e.column(e.checkpoints.len() - 1, f)
}

/// Sample variance and the standard error of that estimate.
fn variance_with_se(x: &[f64]) -> (f64, f64) {
    let m = mean(x);
    let dev: Vec<f64> = x.iter().map(|v| (v - m).powi(2)).collect();
    let n = x.len() as f64;
    (mean(&dev) * n / (n - 1.0), jackknife_mean_stderr(&dev))
}

/// Rounds to a grid of relative spacing `ALGEBRA_REL` so that values equal
/// up to roundoff tie in the KS statistic.
fn quantized(mut x: Vec<f64>, scale: f64) -> Vec<f64> {
    let q = ALGEBRA_REL * scale;
    for v in &mut x {
        *v = (*v / q).round() * q;
    }
    x
}

fn horizon_grid(t: f64) -> Vec<f64> {
    vec![0.0, 0.5 * t, t]
}

fn ks_at_horizon(full: &PathEnsemble, reduced: &PathEnsemble, f: fn(&CheckpointSample) -> f64) -> KsResult {
    let (xf, xr) = (at_horizon(full, f), at_horizon(reduced, f));
    let scale = xf.iter().chain(&xr).fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
    ks_two_sample(&quantized(xf, scale), &quantized(xr, scale))
}

const MARGINALS: [(&str, fn(&CheckpointSample) -> f64); 2] = [("R2", |s| s.r2), ("Z", |s| s.z)];

pub fn scheme_consistency(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (a, ap) = (p.point("a")?, p.point("a_prime")?);
    let (t, dt, n_paths) = (p.positive("horizon")?, p.positive("dt")?, p.count("n_paths")?);
    let p_min = p.positive("p_min")?;
    let study = p
        .list("dt_study")
        .iter()
        .map(|s| s.parse::<f64>().ok().filter(|x| *x > 0.0).ok_or_else(|| p.invalid("dt_study", format!("`{s}` is not a positive factor"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Outcome::new(p.section());
    for (k, name) in p.list("strategies").iter().enumerate() {
        let pol = policy(name, a.n(), p)?;
        let pair = |dt: f64, salt: u64| -> Result<(PathEnsemble, PathEnsemble), RunError> {
            let base = EnsembleConfig::new(pol.clone(), a.clone(), ap.clone(), t, dt, n_paths, derive_seed(seed, salt))
                .with_checkpoints(horizon_grid(t));
            let full = simulate_ensemble(&base)?;
            let reduced = simulate_ensemble(&EnsembleConfig {
                seed: derive_seed(seed, 1000 + salt),
                ..base.with_scheme(Scheme::Reduced)
            })?;
            Ok((full, reduced))
        };
        let (full, reduced) = pair(dt, k as u64)?;
        for (label, f) in MARGINALS {
            let ks = ks_at_horizon(&full, &reduced, f);
            out.info(format!("ks_statistic[{label}:{name}]"), ks.statistic, None);
            out.check(format!("ks_p_value[{label}:{name}]"), ks.p_value, None, ks.p_value > p_min);
        }
        out.info(format!("reduced_clamp_fraction[{name}]"), reduced.clamp_fraction(), None);
        // Step-size study: the KS distance should not grow as dt shrinks.
        for (i, factor) in study.iter().enumerate() {
            let (f_dt, r_dt) = pair(dt * factor, 100 * (i as u64 + 1) + k as u64)?;
            for (label, f) in MARGINALS {
                let ks = ks_at_horizon(&f_dt, &r_dt, f);
                out.info(format!("ks_statistic[{label}:{name}:dt={:e}]", dt * factor), ks.statistic, None);
            }
        }
        out.ensembles.push((format!("full-{name}"), full));
        out.ensembles.push((format!("reduced-{name}"), reduced));
    }
    Ok(out)
}

pub fn closed_forms(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (r0, z0) = (p.positive("r0")?, p.f64("z0")?);
    let (t, dt, n_paths) = (p.positive("horizon")?, p.positive("dt")?, p.count("n_paths")?);
    let k = p.positive("sigmas")?;
    let a = HeisPoint::h1(0.0, 0.0, 0.0);
    // Z = vertical(a′⁻¹a) = −z′ when a is the origin.
    let ap = HeisPoint::h1(r0, 0.0, -z0);
    let mut out = Outcome::new(p.section());
    let cfg = |name: &str, salt: u64| -> Result<EnsembleConfig, RunError> {
        Ok(EnsembleConfig::new(policy(name, 1, p)?, a.clone(), ap.clone(), t, dt, n_paths, derive_seed(seed, salt))
            .with_checkpoints(horizon_grid(t)))
    };

    let sync = simulate_ensemble(&cfg("synchronous", 0)?)?;
    let r_dev = at_horizon(&sync, |s| (s.r2.sqrt() - r0).abs()).into_iter().fold(0.0, f64::max);
    out.check("synchronous_R_max_deviation", r_dev, None, r_dev <= ALGEBRA_REL * r0.max(1.0));
    let (v, se) = variance_with_se(&at_horizon(&sync, |s| s.z - z0));
    let want = r0 * r0 * t;
    out.info("synchronous_Z_variance_expected", want, None);
    out.check("synchronous_Z_variance", v, Some(se), (v - want).abs() <= k * se);

    // Per-path determinism holds for the reduced system; the Euler step of
    // the full system is exact for it in mean only.
    let perverse = simulate_ensemble(&cfg("perverse", 1)?.with_scheme(Scheme::Reduced))?;
    let target = (r0 * r0 + 4.0 * t).sqrt();
    let dev = at_horizon(&perverse, |s| (s.r2.sqrt() - target).abs()).into_iter().fold(0.0, f64::max);
    out.check("perverse_R_max_deviation", dev, None, dev < 5.0 * dt * t);
    let z_dev = at_horizon(&perverse, |s| (s.z - z0).abs()).into_iter().fold(0.0, f64::max);
    out.check("perverse_Z_max_deviation", z_dev, None, z_dev == 0.0);

    let full = simulate_ensemble(&cfg("perverse", 2)?)?;
    let gain = at_horizon(&full, |s| s.r2 - r0 * r0 - 4.0 * t);
    let (m, se) = (mean(&gain), jackknife_mean_stderr(&gain));
    out.check("perverse_full_mean_R2_minus_closed_form", m, Some(se), m.abs() <= k * se);
    let spread = at_horizon(&full, |s| (s.r2.sqrt() - target).abs()).into_iter().fold(0.0, f64::max);
    out.info("perverse_full_R_max_deviation", spread, None);

    out.ensembles.push(("synchronous".into(), sync));
    out.ensembles.push(("perverse-reduced".into(), perverse));
    out.ensembles.push(("perverse-full".into(), full));
    Ok(out)
}

pub fn h2_smoke(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (a, ap) = (p.point("a")?, p.point("a_prime")?);
    if a.n() != 2 || ap.n() != 2 {
        return Err(p.invalid("a", "both points must lie in the five-dimensional group").into());
    }
    let (t, dt, n_paths) = (p.positive("horizon")?, p.positive("dt")?, p.count("n_paths")?);
    let k = p.positive("sigmas")?;
    let r0 = heis_coupling::sim::CouplingState::from_points(&a, &ap)?.r2().sqrt();
    let z0 = heis_coupling::sim::CouplingState::from_points(&a, &ap)?.z();
    let mut out = Outcome::new(p.section());

    let sync = simulate_ensemble(
        &EnsembleConfig::new(policy("synchronous", 2, p)?, a.clone(), ap.clone(), t, dt, n_paths, derive_seed(seed, 0))
            .with_checkpoints(horizon_grid(t)),
    )?;
    let (v, se) = variance_with_se(&at_horizon(&sync, |s| s.z - z0));
    out.info("synchronous_Z_variance_expected", r0 * r0 * t, None);
    out.check("synchronous_Z_variance", v, Some(se), (v - r0 * r0 * t).abs() <= k * se);

    let refl = simulate_ensemble(
        &EnsembleConfig::new(policy("reflection", 2, p)?, a, ap, t, dt, n_paths, derive_seed(seed, 1))
            .with_checkpoints(horizon_grid(t)),
    )?;
    let r = at_horizon(&refl, |s| s.r2.sqrt());
    let (m, se) = (mean(&r), jackknife_mean_stderr(&r));
    out.check("reflection_mean_R", m, Some(se), (m - r0).abs() <= k * se);
    let z = at_horizon(&refl, |s| s.z - z0);
    let (mz, sez) = (mean(&z), jackknife_mean_stderr(&z));
    out.check("reflection_mean_Z_increment", mz, Some(sez), mz.abs() <= k * sez);
    let absorbed = refl.paths.iter().filter(|p| p.absorption_time.is_some()).count();
    out.info("reflection_absorbed_fraction", absorbed as f64 / n_paths as f64, None);

    out.ensembles.push(("synchronous".into(), sync));
    out.ensembles.push(("reflection".into(), refl));
    Ok(out)
}
