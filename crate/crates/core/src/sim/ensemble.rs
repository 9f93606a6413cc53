use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::step::{reduced_kernel, FullKernel};
use super::{CouplingState, ReducedState, SimError};
use crate::coupling::{PolicyInput, PolicyMemory, Regime, StrategyPolicy};
use crate::group::HeisPoint;
use crate::rng::path_rng;
use crate::tolerances::TIME_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Full,
    Reduced,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Full => "full",
            Scheme::Reduced => "reduced",
        }
    }
}

/// `{0} ∪ {T·2⁻ᵏ : k = 0..=10}`, increasing.
pub fn default_checkpoints(horizon: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=10).rev().map(|k| horizon / f64::powi(2.0, k)).collect();
    v.insert(0, 0.0);
    v
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub policy: StrategyPolicy,
    pub start: HeisPoint,
    pub start_prime: HeisPoint,
    pub horizon: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub checkpoints: Vec<f64>,
    pub scheme: Scheme,
    /// A path succeeds the first time `d_H` drops below this radius.
    pub success_radius: f64,
}

impl EnsembleConfig {
    pub fn new(
        policy: StrategyPolicy,
        start: HeisPoint,
        start_prime: HeisPoint,
        horizon: f64,
        dt: f64,
        n_paths: usize,
        seed: u64,
    ) -> Self {
        Self {
            policy,
            start,
            start_prime,
            horizon,
            dt,
            n_paths,
            seed,
            checkpoints: default_checkpoints(horizon),
            scheme: Scheme::Full,
            success_radius: 1e-3,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<f64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_paths == 0 {
            return Err(SimError::Config("n_paths must be at least 1".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::BadStep(self.dt));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(SimError::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        check_checkpoints(&self.checkpoints, self.horizon)?;
        if self.start.n() != self.start_prime.n() || self.start.n() != self.policy.n() {
            return Err(SimError::Dimension);
        }
        if self.scheme == Scheme::Reduced && !self.policy.reduced_is_exact() {
            return Err(SimError::Config(
                "the reduced scheme needs a symmetric frame matrix when n > 1".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_checkpoints(cks: &[f64], horizon: f64) -> Result<(), SimError> {
    if cks.is_empty() {
        return Err(SimError::Config("at least one checkpoint is required".into()));
    }
    if cks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SimError::Config("checkpoints must be strictly increasing".into()));
    }
    if cks[0] < 0.0 || *cks.last().expect("nonempty") > horizon * (1.0 + TIME_EPS) {
        return Err(SimError::Config("checkpoints must lie in [0, horizon]".into()));
    }
    Ok(())
}

/// Values recorded for one path at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CheckpointSample {
    pub r2: f64,
    pub z: f64,
    /// `∫ |vertical drift| ds`, the drift variation of `Z`.
    pub v: f64,
    /// Quadratic variation of the martingale part of `Z`.
    pub qv: f64,
    /// `∫ 2 tr(I − J) ds`, the compensator of `R²`.
    pub trace_drift: f64,
}

impl CheckpointSample {
    pub fn distance(&self) -> f64 {
        (self.r2.max(0.0) + self.z.abs()).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathRecord {
    pub samples: Vec<CheckpointSample>,
    /// Estimated time at which the paths met (reflection regime only).
    pub absorption_time: Option<f64>,
    /// First step end at which `d_H` fell below the success radius.
    pub success_time: Option<f64>,
    /// `|Z|` discarded when gluing the vertical coordinate at contact.
    pub glue_gap: f64,
    pub clamps: u64,
    pub steps: u64,
}

/// Per-path, per-checkpoint output of a simulator.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub checkpoints: Vec<f64>,
    pub paths: Vec<PathRecord>,
    pub seed: u64,
    pub dt: f64,
    pub n: usize,
    pub scheme: String,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    /// `f` applied to every path at checkpoint index `k`, in path order.
    pub fn column<F: Fn(&CheckpointSample) -> f64>(&self, k: usize, f: F) -> Vec<f64> {
        self.paths.iter().map(|p| f(&p.samples[k])).collect()
    }

    pub fn checkpoint_index(&self, t: f64) -> Option<usize> {
        self.checkpoints
            .iter()
            .position(|c| (c - t).abs() <= TIME_EPS * c.abs().max(1.0))
    }

    pub fn total_steps(&self) -> u64 {
        self.paths.iter().map(|p| p.steps).sum()
    }

    pub fn clamp_fraction(&self) -> f64 {
        let steps = self.total_steps();
        if steps == 0 {
            0.0
        } else {
            self.paths.iter().map(|p| p.clamps).sum::<u64>() as f64 / steps as f64
        }
    }

    /// Fraction of paths whose success time is at most `t`.
    pub fn success_fraction(&self, t: f64) -> f64 {
        let hits = self
            .paths
            .iter()
            .filter(|p| p.success_time.is_some_and(|s| s <= t + TIME_EPS))
            .count();
        hits as f64 / self.n_paths() as f64
    }
}

/// Time grid walker: steps of at most `dt`, landing exactly on every
/// checkpoint, with step ends computed from the segment start to avoid
/// accumulating rounding.
pub(crate) struct Clock {
    seg_start: f64,
    k: u64,
    pub(crate) t: f64,
}

impl Clock {
    pub(crate) fn new() -> Self {
        Self { seg_start: 0.0, k: 0, t: 0.0 }
    }

    /// End of the next step of nominal size `dt` towards `target`.
    pub(crate) fn next(&self, dt: f64, target: f64) -> f64 {
        let mut t = self.seg_start + (self.k + 1) as f64 * dt;
        if t >= target - TIME_EPS * target.abs().max(1.0) {
            t = target;
        }
        t
    }

    pub(crate) fn advance(&mut self, t_next: f64, target: f64) {
        if t_next == target {
            self.seg_start = target;
            self.k = 0;
        } else {
            self.k += 1;
        }
        self.t = t_next;
    }
}

/// Records every checkpoint reached at the current time.
pub(crate) fn record_due(
    checkpoints: &[f64],
    next: &mut usize,
    t: f64,
    sample: CheckpointSample,
    out: &mut Vec<CheckpointSample>,
) {
    while *next < checkpoints.len() && checkpoints[*next] <= t {
        out.push(sample);
        *next += 1;
    }
}

#[derive(Default, Clone, Copy)]
pub(crate) struct Diagnostics {
    pub(crate) v: f64,
    pub(crate) qv: f64,
    pub(crate) trace: f64,
}

impl Diagnostics {
    pub(crate) fn sample(&self, r2: f64, z: f64) -> CheckpointSample {
        CheckpointSample { r2, z, v: self.v, qv: self.qv, trace_drift: self.trace }
    }
}

/// Simulates `n_paths` coupled paths and records them at the checkpoints.
pub fn simulate_ensemble(cfg: &EnsembleConfig) -> Result<PathEnsemble, SimError> {
    cfg.validate()?;
    let paths = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| match cfg.scheme {
            Scheme::Full => full_path(cfg, i as u64),
            Scheme::Reduced => reduced_path(cfg, i as u64),
        })
        .collect();
    Ok(PathEnsemble {
        checkpoints: cfg.checkpoints.clone(),
        paths,
        seed: cfg.seed,
        dt: cfg.dt,
        n: cfg.start.n(),
        scheme: cfg.scheme.name().to_string(),
    })
}

fn absorb(memory: &mut PolicyMemory) {
    memory.absorbed = true;
    memory.regime = Regime::Synchronous;
}

/// Probability that a Brownian motion with variance rate `sigma2` crossed
/// zero during a step of length `h` given positive endpoints `x0`, `x1`.
pub(crate) fn bridge_crossing_probability(x0: f64, x1: f64, sigma2: f64, h: f64) -> f64 {
    (-2.0 * x0 * x1 / (sigma2 * h)).exp()
}

fn full_path(cfg: &EnsembleConfig, index: u64) -> PathRecord {
    let policy = &cfg.policy;
    let mut rng = path_rng(cfg.seed, index);
    let mut state = CouplingState::from_points(&cfg.start, &cfg.start_prime).expect("validated");
    let d = state.b.len();
    let mut kernel = FullKernel::new(d / 2);
    let input = |s: &CouplingState| PolicyInput { t: s.t, r2: s.r2(), z: s.z() };
    let mut memory = policy.initial_memory(input(&state));
    let mut rec = PathRecord { samples: Vec::with_capacity(cfg.checkpoints.len()), ..Default::default() };
    let mut diag = Diagnostics::default();
    let mut next_ck = 0;
    let mut clock = Clock::new();
    if state.distance() < cfg.success_radius {
        rec.success_time = Some(0.0);
    }
    record_due(&cfg.checkpoints, &mut next_ck, 0.0, diag.sample(state.r2(), state.z()), &mut rec.samples);
    while next_ck < cfg.checkpoints.len() {
        if memory.absorbed {
            // Merged paths move together; R, Z and the diagnostics are frozen.
            let frozen = diag.sample(state.r2(), state.z());
            rec.samples.resize(cfg.checkpoints.len(), frozen);
            break;
        }
        let target = cfg.checkpoints[next_ck];
        let t_next = clock.next(cfg.dt, target);
        let h = t_next - clock.t;
        let r2 = state.r2();
        let fc = policy.step(PolicyInput { t: clock.t, r2, z: state.z() }, &mut memory);
        let absorbing = policy.absorbs_on_contact(&memory);
        let r = kernel.refresh_frame(&state);
        let sh = h.sqrt();
        for i in 0..d {
            kernel.db[i] = sh * rng.sample::<f64, _>(StandardNormal);
        }
        for i in 0..d {
            kernel.dbh[i] = sh * rng.sample::<f64, _>(StandardNormal);
        }
        kernel.couple(fc);
        diag.v += kernel.vertical_drift(fc).abs() * h;
        diag.qv += 0.25 * r2 * fc.coeffs.sigma_z * fc.coeffs.sigma_z * h;
        diag.trace += fc.coeffs.r2_drift * h;
        kernel.apply(&mut state, h);
        state.t = t_next;
        rec.steps += 1;
        if absorbing && r > 0.0 {
            let s: f64 = (0..d).map(|i| kernel.e1()[i] * (state.b_prime[i] - state.b[i])).sum();
            let sigma2 = fc.coeffs.sigma_r * fc.coeffs.sigma_r;
            let hit = s <= 0.0 || rng.gen::<f64>() < bridge_crossing_probability(r, s, sigma2, h);
            if hit {
                let z = state.z();
                state.b_prime.clone_from(&state.b);
                if policy.glues_vertical() {
                    rec.glue_gap = z.abs();
                    state.a_prime = state.a;
                } else {
                    state.a_prime = state.a - z;
                }
                absorb(&mut memory);
                rec.absorption_time = Some(clock.t + 0.5 * h);
            }
        }
        if rec.success_time.is_none() && state.distance() < cfg.success_radius {
            rec.success_time = Some(t_next);
        }
        clock.advance(t_next, target);
        record_due(&cfg.checkpoints, &mut next_ck, t_next, diag.sample(state.r2(), state.z()), &mut rec.samples);
    }
    rec
}

fn reduced_path(cfg: &EnsembleConfig, index: u64) -> PathRecord {
    let policy = &cfg.policy;
    let mut rng = path_rng(cfg.seed, index);
    let init = CouplingState::from_points(&cfg.start, &cfg.start_prime).expect("validated");
    let mut state = ReducedState { r2: init.r2(), z: init.z() };
    let mut memory = policy.initial_memory(PolicyInput { t: 0.0, r2: state.r2, z: state.z });
    let mut rec = PathRecord { samples: Vec::with_capacity(cfg.checkpoints.len()), ..Default::default() };
    let mut diag = Diagnostics::default();
    let mut next_ck = 0;
    let mut clock = Clock::new();
    if state.distance() < cfg.success_radius {
        rec.success_time = Some(0.0);
    }
    record_due(&cfg.checkpoints, &mut next_ck, 0.0, diag.sample(state.r2, state.z), &mut rec.samples);
    while next_ck < cfg.checkpoints.len() {
        if memory.absorbed {
            let frozen = diag.sample(state.r2, state.z);
            rec.samples.resize(cfg.checkpoints.len(), frozen);
            break;
        }
        let target = cfg.checkpoints[next_ck];
        let t_next = clock.next(cfg.dt, target);
        let h = t_next - clock.t;
        let fc = policy.step(PolicyInput { t: clock.t, r2: state.r2, z: state.z }, &mut memory);
        let c = fc.coeffs;
        let absorbing = policy.absorbs_on_contact(&memory);
        let noise = [rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)];
        let r0 = state.r2.sqrt();
        let (next, clamped) = reduced_kernel(state, &c, h, noise);
        diag.v += c.z_drift.abs() * h;
        diag.qv += 0.25 * state.r2 * c.sigma_z * c.sigma_z * h;
        diag.trace += c.r2_drift * h;
        rec.steps += 1;
        state = next;
        if absorbing && r0 > 0.0 {
            let hit = next.r2 <= 0.0
                || rng.gen::<f64>()
                    < bridge_crossing_probability(r0, next.r2.sqrt(), c.sigma_r * c.sigma_r, h);
            if hit {
                state.r2 = 0.0;
                if policy.glues_vertical() {
                    rec.glue_gap = state.z.abs();
                    state.z = 0.0;
                }
                absorb(&mut memory);
                rec.absorption_time = Some(clock.t + 0.5 * h);
            }
        } else if clamped {
            rec.clamps += 1;
        }
        if rec.success_time.is_none() && state.distance() < cfg.success_radius {
            rec.success_time = Some(t_next);
        }
        clock.advance(t_next, target);
        record_due(&cfg.checkpoints, &mut next_ck, t_next, diag.sample(state.r2, state.z), &mut rec.samples);
    }
    rec
}
