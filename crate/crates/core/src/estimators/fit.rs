use super::{EstimatorError, MomentEstimate};

/// Least-squares fit of `log y = intercept + exponent · log t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub exponent_stderr: f64,
    pub window: (f64, f64),
    /// Residual sum of squares on the log scale.
    pub residual_ss: f64,
    pub n_points: usize,
}

/// Fit of `y = a + b log t`, weighted by `1/y²` so that residuals are
/// comparable with the log-scale residuals of [`PowerLawFit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub a: f64,
    pub b: f64,
    pub window: (f64, f64),
    /// `Σ (log y − log(a + b log t))²`; infinite if the model goes nonpositive.
    pub residual_ss: f64,
    pub n_points: usize,
}

fn in_window(
    estimates: &[MomentEstimate],
    window: (f64, f64),
) -> Result<Vec<(f64, f64)>, EstimatorError> {
    let pts: Vec<(f64, f64)> = estimates
        .iter()
        .filter(|e| e.time >= window.0 && e.time <= window.1)
        .map(|e| (e.time, e.estimate))
        .collect();
    if pts.len() < 3 {
        return Err(EstimatorError::TooFewPoints(pts.len()));
    }
    if let Some(&(_, y)) = pts.iter().find(|(t, y)| !(*y > 0.0) || !(*t > 0.0)) {
        return Err(EstimatorError::Nonpositive(y));
    }
    Ok(pts)
}

/// Weighted least squares for `y ≈ c0 + c1 x`; returns `(c0, c1, se(c1))`.
fn weighted_line(x: &[f64], y: &[f64], w: &[f64]) -> (f64, f64, f64) {
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(w).map(|(a, b)| b * (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (a - mx) * (c - my)).sum();
    let c1 = sxy / sxx;
    let c0 = my - c1 * mx;
    let n = x.len() as f64;
    let rss: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (c - c0 - c1 * a).powi(2)).sum();
    let se = if n > 2.0 { (rss / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (c0, c1, se)
}

pub fn fit_power_law(
    estimates: &[MomentEstimate],
    window: (f64, f64),
) -> Result<PowerLawFit, EstimatorError> {
    let pts = in_window(estimates, window)?;
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let w = vec![1.0; x.len()];
    let (c0, c1, se) = weighted_line(&x, &y, &w);
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let tss: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let rss: f64 = x.iter().zip(&y).map(|(a, b)| (b - c0 - c1 * a).powi(2)).sum();
    let r_squared = if tss > 0.0 { (1.0 - rss / tss).clamp(0.0, 1.0) } else { 1.0 };
    Ok(PowerLawFit {
        exponent: c1,
        intercept: c0,
        r_squared,
        exponent_stderr: se,
        window,
        residual_ss: rss,
        n_points: pts.len(),
    })
}

pub fn fit_log_model(estimates: &[MomentEstimate], window: (f64, f64)) -> Result<LogFit, EstimatorError> {
    let pts = in_window(estimates, window)?;
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let w: Vec<f64> = y.iter().map(|v| 1.0 / (v * v)).collect();
    let (a, b, _) = weighted_line(&x, &y, &w);
    let residual_ss = x
        .iter()
        .zip(&y)
        .map(|(lt, v)| {
            let m = a + b * lt;
            if m > 0.0 {
                (v.ln() - m.ln()).powi(2)
            } else {
                f64::INFINITY
            }
        })
        .sum();
    Ok(LogFit { a, b, window, residual_ss, n_points: pts.len() })
}
