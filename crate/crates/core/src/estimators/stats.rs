//! Elementary sample statistics.

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance (zero for fewer than two values).
pub fn variance(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

/// Jackknife standard error of the sample mean. For the mean the
/// leave-one-out estimator reduces to `s/√n`.
pub fn jackknife_mean_stderr(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// Jackknife standard error of `mean(num)/mean(den)` over paired samples.
pub fn jackknife_ratio_stderr(num: &[f64], den: &[f64]) -> f64 {
    let n = num.len();
    assert_eq!(n, den.len());
    if n < 2 {
        return 0.0;
    }
    let (sn, sd): (f64, f64) = (num.iter().sum(), den.iter().sum());
    let leave: Vec<f64> = (0..n).map(|i| (sn - num[i]) / (sd - den[i])).collect();
    let m = mean(&leave);
    let ss: f64 = leave.iter().map(|v| (v - m) * (v - m)).sum();
    ((n - 1) as f64 / n as f64 * ss).sqrt()
}

/// Sample skewness and its approximate standard error `√(6/n)`.
pub fn skewness(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = mean(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m3 = x.iter().map(|v| (v - m).powi(3)).sum::<f64>() / n;
    (m3 / m2.powf(1.5), (6.0 / n).sqrt())
}
