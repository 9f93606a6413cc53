//! Lower bound `E|N_h| ≥ a_p √β` for a continuous martingale `N` with
//! `P(⟨N⟩_h ≥ β) ≥ p`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::{jackknife_mean_stderr, mean};
use super::{a_p_constant, EstimatorError};
use crate::rng::path_rng;

/// Value of the martingale at time `h` and its bracket `⟨N⟩_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartingaleSample {
    pub value: f64,
    pub bracket: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgCheck {
    pub precondition_ok: bool,
    /// Empirical `P(⟨N⟩_h ≥ β)`.
    pub prob_bracket: f64,
    pub mean_abs: f64,
    pub stderr: f64,
    /// `a_p √β`.
    pub bound: f64,
    pub pass: bool,
}

/// Passes iff the precondition holds and `Ê|N_h| ≥ a_p √β − 3·stderr`.
/// A violated precondition is reported through `precondition_ok`.
pub fn martingale_lower_bound_check(
    samples: &[MartingaleSample],
    beta: f64,
    p: f64,
) -> Result<MgCheck, EstimatorError> {
    if samples.is_empty() {
        return Err(EstimatorError::Empty);
    }
    if !(beta >= 0.0) {
        return Err(EstimatorError::Domain(format!("beta = {beta} must be nonnegative")));
    }
    let a = a_p_constant(p)?;
    let abs: Vec<f64> = samples.iter().map(|s| s.value.abs()).collect();
    let prob_bracket =
        samples.iter().filter(|s| s.bracket >= beta).count() as f64 / samples.len() as f64;
    let precondition_ok = prob_bracket >= p;
    let (mean_abs, stderr) = (mean(&abs), jackknife_mean_stderr(&abs));
    let bound = a * beta.sqrt();
    Ok(MgCheck {
        precondition_ok,
        prob_bracket,
        mean_abs,
        stderr,
        bound,
        pass: precondition_ok && mean_abs >= bound - 3.0 * stderr,
    })
}

fn bm_endpoint<R: Rng>(rng: &mut R, h: f64, m_steps: usize) -> f64 {
    let sh = (h / m_steps as f64).sqrt();
    (0..m_steps).map(|_| sh * rng.sample::<f64, _>(StandardNormal)).sum()
}

/// Standard Brownian motion on `[0, h]` by `m_steps` Gaussian increments;
/// the bracket is `h`.
pub fn standard_bm_martingale(n_paths: usize, h: f64, m_steps: usize, seed: u64) -> Vec<MartingaleSample> {
    (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            MartingaleSample { value: bm_endpoint(&mut rng, h, m_steps), bracket: h }
        })
        .collect()
}

/// Brownian motion time-changed so that every even-indexed path is frozen
/// at zero (bracket 0) while odd-indexed paths run normally (bracket `h`).
pub fn frozen_half_martingale(n_paths: usize, h: f64, m_steps: usize, seed: u64) -> Vec<MartingaleSample> {
    (0..n_paths)
        .into_par_iter()
        .map(|i| {
            if i % 2 == 0 {
                MartingaleSample { value: 0.0, bracket: 0.0 }
            } else {
                let mut rng = path_rng(seed, i as u64);
                MartingaleSample { value: bm_endpoint(&mut rng, h, m_steps), bracket: h }
            }
        })
        .collect()
}
