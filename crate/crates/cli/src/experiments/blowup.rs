use heis_coupling::estimators::{jackknife_mean_stderr, jackknife_ratio_stderr, mean};
use heis_coupling::sim::{simulate_ensemble, EnsembleConfig, Scheme};
use heis_coupling::HeisPoint;

use super::{policy, RunError, Schema};
use crate::config::Params;
use crate::report::Outcome;

pub const BLOWUP: Schema = &[
    ("r0", "1"),
    ("z0", "0"),
    ("t_small", "1"),
    ("t_large", "100"),
    ("factor", "10"),
    ("dt", "1e-2"),
    ("n_paths", "4000"),
    ("scheme", "full"),
    ("sigmas", "3"),
];

pub const KENDALL: Schema = &[
    ("kappa", "1"),
    ("epsilon", "0.5"),
    ("r0", "1"),
    ("z0", "0"),
    ("horizons", "10,40,160"),
    ("dt", "1e-2"),
    ("n_paths", "10000"),
    ("threshold", "0.8"),
    ("radius", "1e-3"),
    ("scheme", "full"),
];

fn scheme(p: &Params) -> Result<Scheme, RunError> {
    Ok(match p.choice("scheme", &["full", "reduced"])? {
        "full" => Scheme::Full,
        _ => Scheme::Reduced,
    })
}

/// Left point at the origin, right point at `(r0, 0)` with relative area `z0`.
fn start(p: &Params) -> Result<(HeisPoint, HeisPoint), RunError> {
    Ok((HeisPoint::h1(0.0, 0.0, 0.0), HeisPoint::h1(p.positive("r0")?, 0.0, -p.f64("z0")?)))
}

fn blowup(strategy: &str, p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (a, ap) = start(p)?;
    let (t1, t2) = (p.positive("t_small")?, p.positive("t_large")?);
    if t1 >= t2 {
        return Err(p.invalid("t_large", "must exceed t_small").into());
    }
    let (factor, k) = (p.positive("factor")?, p.positive("sigmas")?);
    let cfg = EnsembleConfig::new(policy(strategy, 1, p)?, a, ap, t2, p.positive("dt")?, p.count("n_paths")?, seed)
        .with_checkpoints(vec![0.0, t1, t2])
        .with_scheme(scheme(p)?);
    let ens = simulate_ensemble(&cfg)?;
    let d2 = |k: usize| ens.column(k, |s| s.distance().powi(2));
    let (small, large) = (d2(1), d2(2));
    let mut out = Outcome::new(p.section());
    out.info(format!("mean_dH2[t={t1}]"), mean(&small), Some(jackknife_mean_stderr(&small)));
    out.info(format!("mean_dH2[t={t2}]"), mean(&large), Some(jackknife_mean_stderr(&large)));
    let ratio = mean(&large) / mean(&small);
    let se = jackknife_ratio_stderr(&large, &small);
    out.check("dH2_growth_ratio", ratio, Some(se), ratio - k * se > factor);
    if strategy == "synchronous" {
        // E Z_t² = Z₀² + R₀² t.
        let z2 = ens.column(2, |s| s.z * s.z);
        let want = p.f64("z0")?.powi(2) + p.positive("r0")?.powi(2) * t2;
        let (m, se) = (mean(&z2), jackknife_mean_stderr(&z2));
        out.check(format!("mean_Z2[t={t2}]"), m, Some(se), (m - want).abs() <= k * se);
    }
    out.ensembles.push((strategy.to_string(), ens));
    Ok(out)
}

pub fn blowup_synchronous(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    blowup("synchronous", p, seed)
}

pub fn blowup_reflection(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    blowup("reflection", p, seed)
}

pub fn blowup_perverse(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    blowup("perverse", p, seed)
}

pub fn kendall_success(p: &Params, seed: u64) -> Result<Outcome, RunError> {
    let (a, ap) = start(p)?;
    let mut horizons = p.positive_list("horizons")?;
    horizons.sort_by(f64::total_cmp);
    horizons.dedup();
    let t_max = *horizons.last().expect("nonempty");
    let mut checkpoints = vec![0.0];
    checkpoints.extend(&horizons);
    let mut cfg = EnsembleConfig::new(policy("kendall", 1, p)?, a, ap, t_max, p.positive("dt")?, p.count("n_paths")?, seed)
        .with_checkpoints(checkpoints)
        .with_scheme(scheme(p)?);
    cfg.success_radius = p.positive("radius")?;
    let ens = simulate_ensemble(&cfg)?;
    let mut out = Outcome::new(p.section());
    let mut fractions = Vec::new();
    for &t in &horizons {
        let hits: Vec<f64> =
            ens.paths.iter().map(|q| q.success_time.is_some_and(|s| s <= t) as u8 as f64).collect();
        let f = mean(&hits);
        out.info(format!("success_fraction[T={t}]"), f, Some(jackknife_mean_stderr(&hits)));
        fractions.push(f);
    }
    let increasing = fractions.windows(2).all(|w| w[1] > w[0]);
    out.check("success_fraction_increasing", increasing as u8 as f64, None, increasing);
    let last = *fractions.last().expect("nonempty");
    let threshold = p.positive("threshold")?;
    out.check(format!("success_fraction_exceeds_threshold[T={t_max}]"), last, None, last > threshold);
    let gap = ens.paths.iter().map(|q| q.glue_gap).fold(0.0, f64::max);
    out.info("max_glue_gap", gap, None);
    out.ensembles.push(("kendall".into(), ens));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::find;

    #[test]
    fn perverse_blows_up_on_a_small_run() {
        let mut p = find("blowup-perverse").unwrap().defaults();
        p.set("n_paths", "50").unwrap();
        p.set("dt", "0.1").unwrap();
        let o = blowup_perverse(&p, 1).unwrap();
        assert!(o.passed());
        let ratio = o.checks.iter().find(|c| c.quantity == "dH2_growth_ratio").unwrap().value;
        assert!(ratio > 50.0, "{ratio}");
    }

    #[test]
    fn kendall_fractions_are_reported_per_horizon() {
        let mut p = find("kendall-success").unwrap().defaults();
        p.set("n_paths", "100").unwrap();
        p.set("horizons", "1,4").unwrap();
        let o = kendall_success(&p, 2).unwrap();
        assert_eq!(o.checks.iter().filter(|c| c.quantity.starts_with("success_fraction[")).count(), 2);
        let mut bad = p.clone();
        bad.set("scheme", "exact").unwrap();
        assert!(kendall_success(&bad, 2).is_err());
    }
}
