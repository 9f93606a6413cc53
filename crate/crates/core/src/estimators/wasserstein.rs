use super::{hungarian, EstimatorError};

/// Empirical `W_p` between two equal-size samples under `metric`:
/// `(min_σ Σ d(xᵢ, y_σ(i))^p / n)^{1/p}` by exact assignment.
pub fn empirical_wasserstein<T, F>(
    samples1: &[T],
    samples2: &[T],
    p: f64,
    metric: F,
) -> Result<f64, EstimatorError>
where
    F: Fn(&T, &T) -> f64,
{
    if !(p > 0.0 && p.is_finite()) {
        return Err(EstimatorError::Domain(format!("order p = {p} must be positive and finite")));
    }
    if samples1.len() != samples2.len() {
        return Err(EstimatorError::Mismatch(samples1.len(), samples2.len()));
    }
    let n = samples1.len();
    let cost: Vec<f64> = samples1
        .iter()
        .flat_map(|x| samples2.iter().map(|y| metric(x, y).powf(p)).collect::<Vec<_>>())
        .collect();
    let (_, total) = hungarian(&cost, n)?;
    Ok((total / n as f64).powf(1.0 / p))
}
