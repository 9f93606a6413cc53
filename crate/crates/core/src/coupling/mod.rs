//! Coupling matrices, the moving frame and the named coupling strategies.
//!
//! A co-adapted coupling of two Brownian motions on ℝ²ⁿ is driven by
//! `dB′ = J dB + Ĵ dB̂` with `J Jᵀ + Ĵ Ĵᵀ = I`. Strategies are expressed in the
//! moving frame `Q` whose first column points along the horizontal difference;
//! there the matrix is `K = Qᵀ J Q`.

mod frame;
mod matrix;
mod policy;

pub use frame::{change_basis, Frame};
pub(crate) use frame::fill_columns as fill_frame;
pub use matrix::{Basis, CouplingMatrix, Validation};
pub use policy::{
    FrameCoupling, PolicyInput, PolicyMemory, ReducedCoefficients, Regime, StrategyKind,
    StrategyPolicy,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("coupling matrix must be square with even dimension >= 2, got {0}x{1}")]
    Shape(usize, usize),
    #[error("coupling matrix has non-finite entries")]
    NonFinite,
    #[error("invalid coupling matrix: largest singular value {0} exceeds 1")]
    Invalid(f64),
    #[error("frame undefined: the two horizontal positions coincide")]
    FrameUndefined,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected a matrix in the {0:?} basis")]
    WrongBasis(Basis),
    #[error("kendall parameters need 0 < epsilon < kappa, got kappa={0}, epsilon={1}")]
    BadKendall(f64, f64),
}
