//! The Heisenberg group ℍₙ = ℝ²ⁿ × ℝ.
//!
//! Horizontal coordinates are stored as pairs `(x₁, y₁, …, xₙ, yₙ)`. The group
//! law twists the vertical coordinate by the symplectic form
//! `ω(u, v) = Σ (xᵢ y′ᵢ − yᵢ x′ᵢ)`:
//!
//! ```text
//! (h, z) · (h′, z′) = (h + h′, z + z′ + ½ ω(h, h′))
//! ```

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("horizontal dimension must be even and at least 2, got {0}")]
    BadDimension(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dilation factor must be positive, got {0}")]
    BadDilation(f64),
}

/// Symplectic form on ℝ²ⁿ, summed over the coordinate pairs.
pub fn symplectic(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.chunks_exact(2)
        .zip(v.chunks_exact(2))
        .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
        .sum()
}

/// A point of ℍₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisPoint {
    horizontal: Vec<f64>,
    vertical: f64,
}

impl HeisPoint {
    pub fn new(horizontal: Vec<f64>, vertical: f64) -> Result<Self, GroupError> {
        let d = horizontal.len();
        if d < 2 || d % 2 != 0 {
            return Err(GroupError::BadDimension(d));
        }
        if !vertical.is_finite() || horizontal.iter().any(|v| !v.is_finite()) {
            return Err(GroupError::NonFinite);
        }
        Ok(Self { horizontal, vertical })
    }

    /// Point of ℍ₁.
    pub fn h1(x: f64, y: f64, z: f64) -> Self {
        Self { horizontal: vec![x, y], vertical: z }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Self { horizontal: vec![0.0; 2 * n], vertical: 0.0 }
    }

    /// The `n` of ℍₙ.
    pub fn n(&self) -> usize {
        self.horizontal.len() / 2
    }

    pub fn horizontal(&self) -> &[f64] {
        &self.horizontal
    }

    pub fn vertical(&self) -> f64 {
        self.vertical
    }

    fn check_same(&self, other: &Self) -> Result<(), GroupError> {
        if self.horizontal.len() != other.horizontal.len() {
            return Err(GroupError::DimensionMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        self.check_same(other)?;
        let horizontal = self
            .horizontal
            .iter()
            .zip(&other.horizontal)
            .map(|(a, b)| a + b)
            .collect();
        let vertical = self.vertical
            + other.vertical
            + 0.5 * symplectic(&self.horizontal, &other.horizontal);
        Ok(Self { horizontal, vertical })
    }

    pub fn inverse(&self) -> Self {
        Self {
            horizontal: self.horizontal.iter().map(|v| -v).collect(),
            vertical: -self.vertical,
        }
    }

    pub fn dilate(&self, d: Dilation) -> Self {
        let l = d.lambda();
        Self {
            horizontal: self.horizontal.iter().map(|v| l * v).collect(),
            vertical: l * l * self.vertical,
        }
    }

    /// Multiplies every pair `xᵢ + i yᵢ` by `e^{iθ}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let horizontal = self
            .horizontal
            .chunks_exact(2)
            .flat_map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])
            .collect();
        Self { horizontal, vertical: self.vertical }
    }

    /// Homogeneous quasinorm `√(‖h‖² + |z|)`.
    pub fn quasinorm(&self) -> f64 {
        (self.horizontal_norm_sq() + self.vertical.abs()).sqrt()
    }

    pub fn horizontal_norm_sq(&self) -> f64 {
        self.horizontal.iter().map(|v| v * v).sum()
    }
}

/// Positive scale factor of an anisotropic dilation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dilation(f64);

impl Dilation {
    pub fn new(lambda: f64) -> Result<Self, GroupError> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Self(lambda))
        } else {
            Err(GroupError::BadDilation(lambda))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }
}

/// Convenience wrapper around [`HeisPoint::dilate`].
pub fn dilate(lambda: f64, a: &HeisPoint) -> Result<HeisPoint, GroupError> {
    Ok(a.dilate(Dilation::new(lambda)?))
}

/// Quasidistance `d_H(a, a′) = H(a⁻¹ a′)`.
pub fn quasi_distance(a: &HeisPoint, b: &HeisPoint) -> Result<f64, GroupError> {
    Ok(a.inverse().mul(b)?.quasinorm())
}

/// Carnot–Carathéodory distance between two points on the same vertical line.
pub fn vertical_cc(h: f64) -> f64 {
    2.0 * (std::f64::consts::PI * h.abs()).sqrt()
}

/// A unitary map of ℂⁿ ≅ ℝ²ⁿ acting on the horizontal layer.
///
/// Unitary maps preserve `ω = Im⟨w, w′⟩`, so `(h, z) ↦ (Uh, z)` is an
/// automorphism of ℍₙ and an isometry of `d_H`.
#[derive(Debug, Clone)]
pub struct Unitary {
    // row-major n×n
    m: Vec<Complex64>,
    n: usize,
}

impl Unitary {
    pub fn identity(n: usize) -> Self {
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            m[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { m, n }
    }

    /// A unitary `U` with `U h = ‖h‖ e₁` (first complex coordinate real and
    /// nonnegative, all others zero). For n = 1 this is a rotation.
    pub fn aligning(h: &[f64]) -> Self {
        let n = h.len() / 2;
        let w: Vec<Complex64> = h.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Self::identity(n);
        }
        let w: Vec<Complex64> = w.iter().map(|c| c / norm).collect();
        let phase = if w[0].norm() > 0.0 { w[0] / w[0].norm() } else { Complex64::new(1.0, 0.0) };
        // Householder reflection H = I − 2 v v*/(v* v) with v = w − phase·e₁ maps w to phase·e₁.
        let mut v = w.clone();
        v[0] -= phase;
        let vv: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let mut m = Self::identity(n).m;
        if vv > 1e-300 {
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] -= 2.0 * v[i] * v[j].conj() / vv;
                }
            }
        }
        let unphase = phase.conj();
        for c in m.iter_mut() {
            *c *= unphase;
        }
        Self { m, n }
    }

    fn apply_complex(&self, h: &[f64], adjoint: bool) -> Vec<f64> {
        let n = self.n;
        let w: Vec<Complex64> = h.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, wj) in w.iter().enumerate() {
                let u = if adjoint { self.m[j * n + i].conj() } else { self.m[i * n + j] };
                acc += u * wj;
            }
            out.push(acc.re);
            out.push(acc.im);
        }
        out
    }

    pub fn apply(&self, p: &HeisPoint) -> HeisPoint {
        HeisPoint { horizontal: self.apply_complex(&p.horizontal, false), vertical: p.vertical }
    }

    pub fn apply_inverse(&self, p: &HeisPoint) -> HeisPoint {
        HeisPoint { horizontal: self.apply_complex(&p.horizontal, true), vertical: p.vertical }
    }
}
