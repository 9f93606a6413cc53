use nalgebra::DMatrix;

use super::CouplingError;
use crate::tolerances::{EIGEN_CLIP, SINGULAR_SLACK};

/// Which coordinates a coupling matrix is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// The canonical coordinates of ℝ²ⁿ (the matrix `J`).
    Canonical,
    /// The moving frame (the matrix `K = Qᵀ J Q`).
    Frame,
}

/// Outcome of [`CouplingMatrix::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub valid: bool,
    pub max_singular: f64,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    entries: DMatrix<f64>,
    basis: Basis,
}

impl CouplingMatrix {
    /// Wraps a square even-dimensional matrix. Validity against `JJᵀ ≤ I` is
    /// checked separately by [`validate`](Self::validate).
    pub fn new(entries: DMatrix<f64>, basis: Basis) -> Result<Self, CouplingError> {
        let (r, c) = entries.shape();
        if r != c || r < 2 || r % 2 != 0 {
            return Err(CouplingError::Shape(r, c));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(CouplingError::NonFinite);
        }
        Ok(Self { entries, basis })
    }

    /// Row-major constructor.
    pub fn from_rows(dim: usize, rows: &[f64], basis: Basis) -> Result<Self, CouplingError> {
        if rows.len() != dim * dim {
            return Err(CouplingError::Shape(dim, rows.len() / dim.max(1)));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, rows), basis)
    }

    pub fn identity(n: usize, basis: Basis) -> Self {
        Self { entries: DMatrix::identity(2 * n, 2 * n), basis }
    }

    pub fn diagonal(diag: &[f64], basis: Basis) -> Result<Self, CouplingError> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)), basis)
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Side length `2n`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    /// Entry with 1-based indices, matching the usual `K^{i,j}` notation.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1, j - 1)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub(crate) fn with_basis(entries: DMatrix<f64>, basis: Basis) -> Self {
        Self { entries, basis }
    }

    pub fn max_singular_value(&self) -> f64 {
        self.entries
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Checks `J Jᵀ ≤ I`, i.e. the largest singular value is at most `1 + 1e-10`.
    pub fn validate(&self) -> Validation {
        let s = self.max_singular_value();
        if s <= 1.0 + SINGULAR_SLACK {
            Validation { valid: true, max_singular: s, reason: None }
        } else {
            let worst = self.entries.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let reason = if worst > 1.0 {
                format!("entry of magnitude {worst} outside [-1, 1]; largest singular value {s}")
            } else {
                format!("largest singular value {s} exceeds 1")
            };
            Validation { valid: false, max_singular: s, reason: Some(reason) }
        }
    }

    /// Principal square root of `I − J Jᵀ`, the symmetric PSD completion `Ĵ`.
    pub fn complete_jhat(&self) -> Result<DMatrix<f64>, CouplingError> {
        let v = self.validate();
        if !v.valid {
            return Err(CouplingError::Invalid(v.max_singular));
        }
        let d = self.dim();
        let m = DMatrix::<f64>::identity(d, d) - &self.entries * self.entries.transpose();
        let m = (&m + m.transpose()) * 0.5;
        let (vals, u) = jacobi_eigen(m);
        let roots = vals.map(|l| if l <= EIGEN_CLIP { 0.0 } else { l.sqrt() });
        let r = &u * DMatrix::from_diagonal(&roots) * u.transpose();
        Ok((&r + r.transpose()) * 0.5)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Slower than QR
/// but accurate to a few ulps, which the square root above relies on.
fn jacobi_eigen(mut a: DMatrix<f64>) -> (nalgebra::DVector<f64>, DMatrix<f64>) {
    let d = a.nrows();
    let mut v = DMatrix::<f64>::identity(d, d);
    for _sweep in 0..100 {
        let off: f64 = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-300 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (a.diagonal(), v)
}
