//! Monte Carlo statistics, exponent fits, exact assignment and closed-form
//! constants.

mod assignment;
mod excursion;
mod fit;
mod ks;
mod martingale;
mod moments;
pub mod quadrature;
mod special;
pub mod stats;
mod wasserstein;

pub use assignment::{assignment_cost, hungarian};
pub use excursion::{
    excursion_functionals, excursion_moment, excursion_moment_from, rejection_excursion_functionals,
    ExcursionConfig,
};
pub use fit::{fit_log_model, fit_power_law, LogFit, PowerLawFit};
pub use ks::{kolmogorov_q, ks_one_sample, ks_two_sample, KsResult};
pub use martingale::{
    frozen_half_martingale, martingale_lower_bound_check, standard_bm_martingale, MartingaleSample,
    MgCheck,
};
pub use moments::{estimate_moment, ensemble_summary, Metric, MomentEstimate, SummaryRow};
pub use stats::{jackknife_mean_stderr, jackknife_ratio_stderr, mean, skewness, variance};
pub use special::{a_p_constant, hitting_cdf, hitting_density, norm_cdf, norm_ppf};
pub use wasserstein::empirical_wasserstein;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("empty input")]
    Empty,
    #[error("instance of size {0} exceeds the exact-solver limit {1}")]
    TooLarge(usize, usize),
    #[error("sample counts differ: {0} vs {1}")]
    Mismatch(usize, usize),
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("fit needs at least 3 points in the window, got {0}")]
    TooFewPoints(usize),
    #[error("nonpositive value {0} in a log-scale fit")]
    Nonpositive(f64),
}
