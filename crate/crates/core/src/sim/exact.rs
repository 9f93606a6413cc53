use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::ensemble::{
    bridge_crossing_probability, check_checkpoints, default_checkpoints, record_due, Diagnostics,
};
use super::{PathEnsemble, PathRecord, SimError};
use crate::rng::path_rng;
use crate::tolerances::TIME_EPS;

/// Exact simulation of the reflection coupling in ℍ₁.
///
/// Until contact, `R = R₀ + 2C` with `C` a Brownian motion and
/// `dZ = R dC̃` with `C̃` independent of `C`. Steps grow geometrically,
/// `h = max(min_step, step_fraction·t)`, clipped to the checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionExactConfig {
    pub r0: f64,
    pub z0: f64,
    pub horizon: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub checkpoints: Vec<f64>,
    pub min_step: f64,
    pub step_fraction: f64,
}

impl ReflectionExactConfig {
    pub fn new(r0: f64, z0: f64, horizon: f64, n_paths: usize, seed: u64) -> Self {
        Self {
            r0,
            z0,
            horizon,
            n_paths,
            seed,
            checkpoints: default_checkpoints(horizon),
            min_step: 1e-3,
            step_fraction: 0.01,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(SimError::Config(format!("R0 must be positive, got {}", self.r0)));
        }
        if !self.z0.is_finite() {
            return Err(SimError::Config("Z0 must be finite".into()));
        }
        if self.n_paths == 0 {
            return Err(SimError::Config("n_paths must be at least 1".into()));
        }
        if !(self.min_step > 0.0) {
            return Err(SimError::BadStep(self.min_step));
        }
        if !(self.step_fraction >= 0.0) {
            return Err(SimError::Config("step_fraction must be nonnegative".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(SimError::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        check_checkpoints(&self.checkpoints, self.horizon)
    }
}

pub fn simulate_reflection_exact(cfg: &ReflectionExactConfig) -> Result<PathEnsemble, SimError> {
    cfg.validate()?;
    let paths = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| exact_path(cfg, i as u64))
        .collect();
    Ok(PathEnsemble {
        checkpoints: cfg.checkpoints.clone(),
        paths,
        seed: cfg.seed,
        dt: cfg.min_step,
        n: 1,
        scheme: "exact".to_string(),
    })
}

fn exact_path(cfg: &ReflectionExactConfig, index: u64) -> PathRecord {
    let mut rng = path_rng(cfg.seed, index);
    let mut rec = PathRecord { samples: Vec::with_capacity(cfg.checkpoints.len()), ..Default::default() };
    let (mut r, mut z, mut t) = (cfg.r0, cfg.z0, 0.0);
    let mut diag = Diagnostics::default();
    let mut next_ck = 0;
    record_due(&cfg.checkpoints, &mut next_ck, 0.0, diag.sample(r * r, z), &mut rec.samples);
    while next_ck < cfg.checkpoints.len() {
        if rec.absorption_time.is_some() {
            let frozen = diag.sample(0.0, z);
            rec.samples.resize(cfg.checkpoints.len(), frozen);
            break;
        }
        let target = cfg.checkpoints[next_ck];
        let mut h = cfg.min_step.max(cfg.step_fraction * t);
        if t + h >= target - TIME_EPS * target.max(1.0) {
            h = target - t;
        }
        let xi: f64 = rng.sample(StandardNormal);
        let mut r_next = r + 2.0 * h.sqrt() * xi;
        let hit = r_next <= 0.0 || rng.gen::<f64>() < bridge_crossing_probability(r, r_next, 4.0, h);
        if hit {
            r_next = 0.0;
        }
        let var = 0.5 * h * (r * r + r_next * r_next);
        z += var.sqrt() * rng.sample::<f64, _>(StandardNormal);
        diag.qv += var;
        diag.trace += 4.0 * h;
        rec.steps += 1;
        if hit {
            rec.absorption_time = Some(t + 0.5 * h);
        }
        t = if h == target - t { target } else { t + h };
        r = r_next;
        record_due(&cfg.checkpoints, &mut next_ck, t, diag.sample(r * r, z), &mut rec.samples);
    }
    rec
}
