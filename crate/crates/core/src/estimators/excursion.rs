//! Moments of `∫₀¹ X_s² ds` for a normalized Brownian excursion `X`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::{jackknife_mean_stderr, mean};
use crate::rng::path_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcursionConfig {
    pub n_samples: usize,
    pub m_steps: usize,
    pub seed: u64,
}

impl Default for ExcursionConfig {
    fn default() -> Self {
        Self { n_samples: 20_000, m_steps: 2048, seed: 0 }
    }
}

/// Samples `∫₀¹ X_s² ds` with `X` the norm of a three-dimensional Brownian
/// bridge from 0 to 0, which is a 3-Bessel bridge, i.e. a normalized
/// excursion. The integral is the trapezoid sum on `m_steps` intervals.
pub fn excursion_functionals(cfg: &ExcursionConfig) -> Vec<f64> {
    let m = cfg.m_steps.max(2);
    (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i as u64);
            let h = 1.0 / m as f64;
            let sh = h.sqrt();
            let mut walk = vec![[0.0f64; 3]; m + 1];
            for k in 1..=m {
                for c in 0..3 {
                    walk[k][c] = walk[k - 1][c] + sh * rng.sample::<f64, _>(StandardNormal);
                }
            }
            let end = walk[m];
            let mut sum = 0.0;
            for (k, w) in walk.iter().enumerate().take(m).skip(1) {
                let s = k as f64 * h;
                sum += (0..3).map(|c| (w[c] - s * end[c]).powi(2)).sum::<f64>();
            }
            h * sum
        })
        .collect()
}

/// `E[(∫X²)^{p/2}]` and its standard error from precomputed functionals.
pub fn excursion_moment_from(values: &[f64], p: f64) -> (f64, f64) {
    let x: Vec<f64> = values.iter().map(|v| v.powf(0.5 * p)).collect();
    (mean(&x), jackknife_mean_stderr(&x))
}

pub fn excursion_moment(p: f64, cfg: &ExcursionConfig) -> (f64, f64) {
    excursion_moment_from(&excursion_functionals(cfg), p)
}

/// Independent sampler: Gaussian random-walk bridges from 0 to 0 on
/// `m_steps` intervals, generated sequentially and rejected as soon as they
/// leave `(0, ∞)` at an interior grid point. The discrete conditioning
/// biases `∫X²` by `O(m^{-1/2})`.
pub fn rejection_excursion_functionals(n_accept: usize, m_steps: usize, seed: u64) -> Vec<f64> {
    let m = m_steps.max(2);
    (0..n_accept)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let h = 1.0 / m as f64;
            'attempt: loop {
                let (mut s, mut sum) = (0.0f64, 0.0f64);
                for k in 0..m - 1 {
                    let remaining = (m - k) as f64;
                    let shrink = (remaining - 1.0) / remaining;
                    s = s * shrink + (h * shrink).sqrt() * rng.sample::<f64, _>(StandardNormal);
                    if s <= 0.0 {
                        continue 'attempt;
                    }
                    sum += s * s;
                }
                return h * sum;
            }
        })
        .collect()
}
