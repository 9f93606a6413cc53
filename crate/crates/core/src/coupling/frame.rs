use nalgebra::DMatrix;

use super::{Basis, CouplingError, CouplingMatrix};
use crate::tolerances::GRAM_SCHMIDT_DROP;

/// Direct orthonormal frame `Q = (e₁, e₂, …)` adapted to a pair of horizontal
/// positions: `e₁ = (B′ − B)/‖B′ − B‖`, `e₂ = (i a₁, …, i aₙ)` where
/// `e₁ = (a₁, …, aₙ)` in complex coordinates, then Gram–Schmidt completion
/// seeded by the canonical vectors in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    q: DMatrix<f64>,
}

impl Frame {
    pub fn new(b: &[f64], b_prime: &[f64]) -> Result<Self, CouplingError> {
        if b.len() != b_prime.len() {
            return Err(CouplingError::DimensionMismatch(b.len(), b_prime.len()));
        }
        let d = b.len();
        if d < 2 || d % 2 != 0 {
            return Err(CouplingError::Shape(d, d));
        }
        let mut cols = Vec::with_capacity(d * d);
        let diff: Vec<f64> = b_prime.iter().zip(b).map(|(p, q)| p - q).collect();
        fill_columns(&diff, &mut cols)?;
        Ok(Self { q: DMatrix::from_column_slice(d, d, &cols) })
    }

    pub fn identity(dim: usize) -> Self {
        Self { q: DMatrix::identity(dim, dim) }
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// `K = Qᵀ J Q`.
    pub fn to_frame(&self, j: &CouplingMatrix) -> Result<CouplingMatrix, CouplingError> {
        self.check(j, Basis::Canonical)?;
        Ok(CouplingMatrix::with_basis(self.q.transpose() * j.entries() * &self.q, Basis::Frame))
    }

    /// `J = Q K Qᵀ`.
    pub fn to_canonical(&self, k: &CouplingMatrix) -> Result<CouplingMatrix, CouplingError> {
        self.check(k, Basis::Frame)?;
        Ok(CouplingMatrix::with_basis(&self.q * k.entries() * self.q.transpose(), Basis::Canonical))
    }

    fn check(&self, m: &CouplingMatrix, want: Basis) -> Result<(), CouplingError> {
        if m.dim() != self.dim() {
            return Err(CouplingError::DimensionMismatch(m.dim(), self.dim()));
        }
        if m.basis() != want {
            return Err(CouplingError::WrongBasis(want));
        }
        Ok(())
    }
}

/// Converts between the canonical and frame bases, in whichever direction the
/// basis tag of `m` calls for.
pub fn change_basis(m: &CouplingMatrix, frame: &Frame) -> Result<CouplingMatrix, CouplingError> {
    match m.basis() {
        Basis::Canonical => frame.to_frame(m),
        Basis::Frame => frame.to_canonical(m),
    }
}

/// Writes the frame adapted to the difference vector `diff` (pointing from B
/// to B′) into `cols`, column-major.
pub(crate) fn fill_columns(diff: &[f64], cols: &mut Vec<f64>) -> Result<(), CouplingError> {
    let d = diff.len();
    let r = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 || !r.is_finite() {
        return Err(CouplingError::FrameUndefined);
    }
    cols.clear();
    cols.extend(diff.iter().map(|v| v / r));
    for i in 0..d / 2 {
        let (x, y) = (cols[2 * i], cols[2 * i + 1]);
        cols.push(-y);
        cols.push(x);
    }
    if d == 2 {
        return Ok(());
    }
    let mut v = vec![0.0; d];
    for seed in 0..d {
        if cols.len() == d * d {
            break;
        }
        v.iter_mut().for_each(|x| *x = 0.0);
        v[seed] = 1.0;
        for _ in 0..2 {
            for c in cols.chunks_exact(d) {
                let dot: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(x, a)| *x -= dot * a);
            }
        }
        let nsq: f64 = v.iter().map(|x| x * x).sum();
        if nsq > GRAM_SCHMIDT_DROP {
            let nrm = nsq.sqrt();
            cols.extend(v.iter().map(|x| x / nrm));
        }
    }
    debug_assert_eq!(cols.len(), d * d);
    let det = DMatrix::from_column_slice(d, d, cols).determinant();
    if det < 0.0 {
        cols[(d - 1) * d..].iter_mut().for_each(|x| *x = -*x);
    }
    Ok(())
}
