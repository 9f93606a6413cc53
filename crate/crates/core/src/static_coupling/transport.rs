use super::StaticError;
use crate::estimators::{assignment_cost, EstimatorError};
use crate::tolerances::ASSIGNMENT_MAX;

/// Optimal cost, per atom, of moving the empirical measure of `samples` to
/// its translate by `shift` under the cost `√|Δ|`, by exact assignment.
pub fn transport_cost_sqrt_1d(samples: &[f64], shift: f64) -> Result<f64, StaticError> {
    let n = samples.len();
    if n == 0 {
        return Err(EstimatorError::Empty.into());
    }
    if n > ASSIGNMENT_MAX {
        return Err(EstimatorError::TooLarge(n, ASSIGNMENT_MAX).into());
    }
    if shift == 0.0 {
        return Ok(0.0);
    }
    let cost: Vec<f64> = samples
        .iter()
        .flat_map(|x| samples.iter().map(move |y| (y + shift - x).abs().sqrt()))
        .collect();
    Ok(assignment_cost(&cost, n)? / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(transport_cost_sqrt_1d(&[1.0, 2.0, 5.0], 0.0).unwrap(), 0.0);
        assert_eq!(transport_cost_sqrt_1d(&[0.0], 0.25).unwrap(), 0.5);
        assert!(transport_cost_sqrt_1d(&[], 1.0).is_err());
        assert!(transport_cost_sqrt_1d(&vec![0.0; ASSIGNMENT_MAX + 1], 1.0).is_err());
    }

    #[test]
    fn concave_cost_prefers_long_jump() {
        // {0, 1} shifted by 1 is {1, 2}: one jump of 2 (cost √2) beats two
        // jumps of 1 (cost 2), and 1 stays put.
        let c = transport_cost_sqrt_1d(&[0.0, 1.0], 1.0).unwrap();
        assert!((c - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
