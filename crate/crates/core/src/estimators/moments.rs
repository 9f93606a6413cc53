use super::stats::{jackknife_mean_stderr, mean};
use super::EstimatorError;
use crate::sim::{CheckpointSample, PathEnsemble};

/// Scalar observed per path and checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Horizontal distance `R`.
    R,
    /// `|Z|`.
    AbsZ,
    /// Quasidistance `√(R² + |Z|)`.
    DH,
}

impl Metric {
    pub fn eval(self, s: &CheckpointSample) -> f64 {
        match self {
            Metric::R => s.r2.max(0.0).sqrt(),
            Metric::AbsZ => s.z.abs(),
            Metric::DH => s.distance(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::R => "R",
            Metric::AbsZ => "absZ",
            Metric::DH => "dH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub time: f64,
    pub p: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub n_paths: usize,
}

/// Sample mean of `metric^p` at every checkpoint, with jackknife standard
/// errors.
pub fn estimate_moment(
    ensemble: &PathEnsemble,
    p: f64,
    metric: Metric,
) -> Result<Vec<MomentEstimate>, EstimatorError> {
    if ensemble.n_paths() == 0 {
        return Err(EstimatorError::Empty);
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(EstimatorError::Domain(format!("moment order {p} must be nonnegative")));
    }
    Ok(ensemble
        .checkpoints
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let x = ensemble.column(k, |s| metric.eval(s).powf(p));
            MomentEstimate {
                time: t,
                p,
                estimate: mean(&x),
                stderr: jackknife_mean_stderr(&x),
                n_paths: x.len(),
            }
        })
        .collect())
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub checkpoint_time: f64,
    pub stat_name: String,
    pub estimate: f64,
    pub stderr: f64,
    pub n_paths: usize,
}

/// Per-checkpoint means of the recorded quantities.
pub fn ensemble_summary(ensemble: &PathEnsemble) -> Vec<SummaryRow> {
    type Stat = (&'static str, fn(&CheckpointSample) -> f64);
    let stats: [Stat; 9] = [
        ("mean_R", |s| s.r2.max(0.0).sqrt()),
        ("mean_R2", |s| s.r2),
        ("mean_Z", |s| s.z),
        ("mean_absZ", |s| s.z.abs()),
        ("mean_Z2", |s| s.z * s.z),
        ("mean_dH", |s| s.distance()),
        ("mean_dH2", |s| s.distance().powi(2)),
        ("mean_V", |s| s.v),
        ("mean_QV", |s| s.qv),
    ];
    let n = ensemble.n_paths();
    let mut rows = Vec::new();
    for (k, &t) in ensemble.checkpoints.iter().enumerate() {
        for (name, f) in stats.iter() {
            let x = ensemble.column(k, f);
            rows.push(SummaryRow {
                checkpoint_time: t,
                stat_name: name.to_string(),
                estimate: mean(&x),
                stderr: jackknife_mean_stderr(&x),
                n_paths: n,
            });
        }
        let x = ensemble.column(k, |s| s.trace_drift);
        rows.push(SummaryRow {
            checkpoint_time: t,
            stat_name: "mean_trace_drift".into(),
            estimate: mean(&x),
            stderr: jackknife_mean_stderr(&x),
            n_paths: n,
        });
        let hit: Vec<f64> = ensemble
            .paths
            .iter()
            .map(|p| p.success_time.is_some_and(|s| s <= t) as u8 as f64)
            .collect();
        rows.push(SummaryRow {
            checkpoint_time: t,
            stat_name: "success_fraction".into(),
            estimate: mean(&hit),
            stderr: jackknife_mean_stderr(&hit),
            n_paths: n,
        });
    }
    rows
}
