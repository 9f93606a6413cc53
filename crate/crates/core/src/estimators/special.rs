//! Normal distribution helpers and the closed forms attached to the
//! reflection coupling.

use libm::erfc;

use super::EstimatorError;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Inverse standard normal CDF: Acklam's rational approximation refined by
/// one Halley step.
pub fn norm_ppf(p: f64) -> Result<f64, EstimatorError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(EstimatorError::Domain(format!("probability {p} not in (0, 1)")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const LOW: f64 = 0.02425;
    let x = if p < LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // Halley refinement; the residual is computed on the smaller tail.
    let e = if x < 0.0 { norm_cdf(x) - p } else { (1.0 - p) - norm_cdf(-x) };
    let u = e / norm_pdf(x);
    Ok(x - u / (1.0 + 0.5 * x * u))
}

/// `a_p = ∫_{|x| ≤ q} |x| φ(x) dx = √(2/π)(1 − e^{−q²/2})` with
/// `q = Φ⁻¹((1+p)/2)`, the first absolute moment of a standard normal
/// restricted to its central mass `p`.
pub fn a_p_constant(p: f64) -> Result<f64, EstimatorError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(EstimatorError::Domain(format!("p = {p} not in (0, 1)")));
    }
    let q = norm_ppf(0.5 * (1.0 + p))?;
    Ok((2.0 / std::f64::consts::PI).sqrt() * -(-0.5 * q * q).exp_m1())
}

fn check_hitting_args(u: f64, r0: f64) -> Result<(), EstimatorError> {
    if !(u > 0.0 && r0 > 0.0) {
        return Err(EstimatorError::Domain(format!("need u > 0 and R0 > 0, got u={u}, R0={r0}")));
    }
    Ok(())
}

/// Density of the contact time of the reflection coupling, the first time
/// `R₀ + 2C` hits zero:
/// `f_τ(u) = (R₀/2) / (√(2π) u^{3/2}) · exp(−R₀²/(8u))`.
pub fn hitting_density(u: f64, r0: f64) -> Result<f64, EstimatorError> {
    check_hitting_args(u, r0)?;
    Ok(0.5 * r0 / (SQRT_2PI * u.powf(1.5)) * (-r0 * r0 / (8.0 * u)).exp())
}

/// `P(τ ≤ u) = erfc(R₀ / (2√(2u)))`.
pub fn hitting_cdf(u: f64, r0: f64) -> Result<f64, EstimatorError> {
    check_hitting_args(u, r0)?;
    Ok(erfc(r0 / (2.0 * (2.0 * u).sqrt())))
}
