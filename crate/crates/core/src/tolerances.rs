//! Numerical tolerances shared across the crate.
//!
//! Every floating-point comparison made by library code or by its tests
//! refers to one of these constants.

/// Relative tolerance for exact algebraic identities of the group law.
pub const ALGEBRA_REL: f64 = 1e-12;

/// Slack on the largest singular value when validating a coupling matrix.
pub const SINGULAR_SLACK: f64 = 1e-10;

/// Tolerance for matrix identities (orthogonality, trace invariance, square roots).
pub const MATRIX_ABS: f64 = 1e-10;

/// Eigenvalues of `I - J J^T` below this magnitude are clipped to zero.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Squared norm below which a Gram-Schmidt seed is considered dependent.
pub const GRAM_SCHMIDT_DROP: f64 = 1e-8;

/// Remaining time below which a checkpoint is considered reached.
pub const TIME_EPS: f64 = 1e-12;

/// Absolute error target of the adaptive Simpson quadrature used as an oracle.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Absolute accuracy target of the inverse normal CDF.
pub const PPF_ABS: f64 = 1e-9;

/// Largest instance accepted by the exact assignment solver.
pub const ASSIGNMENT_MAX: usize = 512;

/// Relative equality check used throughout: `|a - b| <= rel * max(1, |a|, |b|)`.
pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}
