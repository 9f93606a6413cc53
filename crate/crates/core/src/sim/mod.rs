//! Path simulation of coupled Heisenberg Brownian motions.
//!
//! Three simulators share one output type, [`PathEnsemble`]:
//!
//! - the full Euler scheme on `(B, B′, A, A′)`,
//! - the reduced scheme on `(R², Z)` (Milstein in `R²`, Euler in `Z`),
//! - the exact scheme for the reflection coupling (`R/2` is a Brownian
//!   motion stopped at zero and `Z` is conditionally Gaussian given `R`).
//!
//! Every path draws from its own random stream, so ensembles are identical
//! whatever the number of worker threads.

mod brownian;
mod ensemble;
mod exact;
mod state;
mod step;

pub use brownian::{sample_heisenberg_bm, sample_heisenberg_bm_path};
pub use ensemble::{
    default_checkpoints, simulate_ensemble, CheckpointSample, EnsembleConfig, PathEnsemble,
    PathRecord, Scheme,
};
pub use exact::{simulate_reflection_exact, ReflectionExactConfig};
pub use state::{CouplingState, ReducedState};
pub use step::{step_full, step_reduced};

use thiserror::Error;

use crate::coupling::CouplingError;
use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("step size must be positive, got {0}")]
    BadStep(f64),
    #[error("dimension mismatch between state, matrix and noise")]
    Dimension,
    #[error("negative R² input {0}")]
    NegativeR2(f64),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid configuration: {0}")]
    Config(String),
}
