use super::{CouplingState, ReducedState, SimError};
use crate::coupling::{fill_frame, Basis, CouplingMatrix, FrameCoupling, ReducedCoefficients};
use crate::group::symplectic;

/// One Euler step of the full coordinates.
///
/// `noise` holds `4n` standard Gaussians: the first `2n` drive `B`, the rest
/// drive the independent motion `B̂`. Lévy areas use left-endpoint Itô sums.
pub fn step_full(
    state: &CouplingState,
    j: &CouplingMatrix,
    dt: f64,
    noise: &[f64],
) -> Result<CouplingState, SimError> {
    if !(dt > 0.0) {
        return Err(SimError::BadStep(dt));
    }
    let d = state.b.len();
    if j.dim() != d || noise.len() != 2 * d {
        return Err(SimError::Dimension);
    }
    if j.basis() != Basis::Canonical {
        return Err(SimError::Coupling(crate::coupling::CouplingError::WrongBasis(
            Basis::Canonical,
        )));
    }
    let j_hat = j.complete_jhat()?;
    let s = dt.sqrt();
    let db: Vec<f64> = noise[..d].iter().map(|x| s * x).collect();
    let dbh: Vec<f64> = noise[d..].iter().map(|x| s * x).collect();
    let je = j.entries();
    let dbp: Vec<f64> = (0..d)
        .map(|r| (0..d).map(|c| je[(r, c)] * db[c] + j_hat[(r, c)] * dbh[c]).sum())
        .collect();
    let mut next = state.clone();
    next.a += 0.5 * symplectic(&state.b, &db);
    next.a_prime += 0.5 * symplectic(&state.b_prime, &dbp);
    next.b.iter_mut().zip(&db).for_each(|(x, dx)| *x += dx);
    next.b_prime.iter_mut().zip(&dbp).for_each(|(x, dx)| *x += dx);
    next.t += dt;
    Ok(next)
}

/// One step of the reduced `(R², Z)` system under the frame matrix `K`:
/// Milstein for `R²`, Euler for `Z`.
///
/// `noise` holds two independent standard Gaussians, correlated internally
/// with `ρ`. At `R = 0` both diffusion coefficients vanish. For a valid `K`
/// the step is `(R + σ_R ΔC)² + (nonnegative drift)·dt`, so `R²` stays
/// nonnegative; a negative value (roundoff only) is clamped to zero and the
/// returned flag reports it.
pub fn step_reduced(
    rz: ReducedState,
    k: &CouplingMatrix,
    dt: f64,
    noise: [f64; 2],
) -> Result<(ReducedState, bool), SimError> {
    if rz.r2 < 0.0 {
        return Err(SimError::NegativeR2(rz.r2));
    }
    if !(dt > 0.0) {
        return Err(SimError::BadStep(dt));
    }
    if k.basis() != Basis::Frame {
        return Err(SimError::Coupling(crate::coupling::CouplingError::WrongBasis(Basis::Frame)));
    }
    if !k.validate().valid {
        return Err(SimError::Coupling(crate::coupling::CouplingError::Invalid(
            k.max_singular_value(),
        )));
    }
    Ok(reduced_kernel(rz, &ReducedCoefficients::from_frame_matrix(k), dt, noise))
}

pub(crate) fn reduced_kernel(
    rz: ReducedState,
    c: &ReducedCoefficients,
    dt: f64,
    noise: [f64; 2],
) -> (ReducedState, bool) {
    let r = rz.r2.max(0.0).sqrt();
    let s = dt.sqrt();
    let dc = s * noise[0];
    let dct = s * (c.rho * noise[0] + (1.0 - c.rho * c.rho).max(0.0).sqrt() * noise[1]);
    // Milstein term for the square-root diffusion; exact when R is driftless.
    let mut r2 = rz.r2 + 2.0 * r * c.sigma_r * dc + c.sigma_r * c.sigma_r * (dc * dc - dt) + c.r2_drift * dt;
    let z = rz.z + 0.5 * r * c.sigma_z * dct + c.z_drift * dt;
    let clamped = r2 < 0.0;
    if clamped {
        r2 = 0.0;
    }
    (ReducedState { r2, z }, clamped)
}

/// Scratch buffers for the allocation-free full step used by the ensemble
/// simulator.
pub(crate) struct FullKernel {
    d: usize,
    q: Vec<f64>,
    diff: Vec<f64>,
    u: Vec<f64>,
    uh: Vec<f64>,
    w: Vec<f64>,
    pub(crate) db: Vec<f64>,
    pub(crate) dbh: Vec<f64>,
    pub(crate) dbp: Vec<f64>,
}

impl FullKernel {
    pub(crate) fn new(n: usize) -> Self {
        let d = 2 * n;
        Self {
            d,
            q: vec![0.0; d * d],
            diff: vec![0.0; d],
            u: vec![0.0; d],
            uh: vec![0.0; d],
            w: vec![0.0; d],
            db: vec![0.0; d],
            dbh: vec![0.0; d],
            dbp: vec![0.0; d],
        }
    }

    /// Rebuilds the frame at the current state; identity when `R = 0`.
    /// Returns the first frame vector's signed component of `B′ − B`, i.e. `R`.
    pub(crate) fn refresh_frame(&mut self, state: &CouplingState) -> f64 {
        let d = self.d;
        for i in 0..d {
            self.diff[i] = state.b_prime[i] - state.b[i];
        }
        let r = self.diff.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 0.0 {
            fill_frame(&self.diff, &mut self.q).expect("nonzero difference");
        } else {
            self.q.clear();
            self.q.resize(d * d, 0.0);
            for i in 0..d {
                self.q[i * d + i] = 1.0;
            }
        }
        r
    }

    /// First frame vector (column-major storage).
    pub(crate) fn e1(&self) -> &[f64] {
        &self.q[..self.d]
    }

    /// Computes `ΔB′ = Q (K Qᵀ ΔB + K̂ Qᵀ ΔB̂)` from `db`, `dbh` into `dbp`.
    pub(crate) fn couple(&mut self, fc: &FrameCoupling) {
        let d = self.d;
        for c in 0..d {
            let col = &self.q[c * d..(c + 1) * d];
            self.u[c] = col.iter().zip(&self.db).map(|(a, b)| a * b).sum();
            self.uh[c] = col.iter().zip(&self.dbh).map(|(a, b)| a * b).sum();
        }
        let k = fc.k.entries();
        for r in 0..d {
            let mut acc = 0.0;
            for c in 0..d {
                acc += k[(r, c)] * self.u[c] + fc.k_hat[(r, c)] * self.uh[c];
            }
            self.w[r] = acc;
        }
        self.dbp.iter_mut().for_each(|x| *x = 0.0);
        for c in 0..d {
            let col = &self.q[c * d..(c + 1) * d];
            let wc = self.w[c];
            self.dbp.iter_mut().zip(col).for_each(|(x, q)| *x += q * wc);
        }
    }

    /// `½ Σᵢ (J^{2i,2i−1} − J^{2i−1,2i})` for `J = Q K Qᵀ`: the vertical drift.
    pub(crate) fn vertical_drift(&self, fc: &FrameCoupling) -> f64 {
        if self.d == 2 {
            return fc.coeffs.z_drift;
        }
        if fc.is_symmetric() {
            return 0.0;
        }
        let d = self.d;
        let k = fc.k.entries();
        let qe = |row: usize, col: usize| self.q[col * d + row];
        let j = |r: usize, c: usize| {
            let mut acc = 0.0;
            for a in 0..d {
                for b in 0..d {
                    acc += qe(r, a) * k[(a, b)] * qe(c, b);
                }
            }
            acc
        };
        (0..d / 2).map(|i| 0.5 * (j(2 * i + 1, 2 * i) - j(2 * i, 2 * i + 1))).sum()
    }

    pub(crate) fn apply(&self, state: &mut CouplingState, h: f64) {
        state.a += 0.5 * symplectic(&state.b, &self.db);
        state.a_prime += 0.5 * symplectic(&state.b_prime, &self.dbp);
        state.b.iter_mut().zip(&self.db).for_each(|(x, dx)| *x += dx);
        state.b_prime.iter_mut().zip(&self.dbp).for_each(|(x, dx)| *x += dx);
        state.t += h;
    }
}
