//! A fixed-time coupling of two Heisenberg Brownian motions whose expected
//! quasidistance stays comparable to the initial one, uniformly in time.
//!
//! After moving the pair to canonical position (left start at the origin,
//! right start at `(x′ e₁, z″)`), the horizontal parts are coupled by
//! translation and the vertical parts by a coupling of the conditional law of
//! the Lévy area with its translate by `x′ Y₁`.

mod bridge;
mod coupling;
mod transport;

pub use bridge::{
    bridge_pool, sample_levy_area_given_endpoint, sample_standard_bridge, BridgeFunctionals,
    PairFunctionals,
};
pub use coupling::{
    baseline_translation_couple, canonical_position, static_couple, CanonicalPosition,
    StaticCouplingConfig, StaticJointSample,
};
pub use transport::transport_cost_sqrt_1d;

use thiserror::Error;

use crate::estimators::EstimatorError;
use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StaticError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error("invalid configuration: {0}")]
    Config(String),
}
