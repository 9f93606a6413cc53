//! Experiment outcomes and the files they are written to.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use heis_coupling::estimators::{ensemble_summary, SummaryRow};
use heis_coupling::io::{write_ensemble_csv, write_joint_csv, write_summary_csv};
use heis_coupling::sim::PathEnsemble;
use heis_coupling::static_coupling::StaticJointSample;
use serde::Serialize;

/// One line of `report.jsonl`. `pass` is absent for informational values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub experiment: String,
    pub quantity: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub experiment: String,
    pub checks: Vec<Check>,
    pub ensembles: Vec<(String, PathEnsemble)>,
    pub joint: Vec<(String, Vec<StaticJointSample>)>,
}

impl Outcome {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.to_string(), ..Default::default() }
    }

    pub fn check(&mut self, quantity: impl Into<String>, value: f64, stderr: Option<f64>, pass: bool) {
        self.push(quantity.into(), value, stderr, Some(pass));
    }

    pub fn info(&mut self, quantity: impl Into<String>, value: f64, stderr: Option<f64>) {
        self.push(quantity.into(), value, stderr, None);
    }

    fn push(&mut self, quantity: String, value: f64, stderr: Option<f64>, pass: Option<bool>) {
        self.checks.push(Check { experiment: self.experiment.clone(), quantity, value, stderr, pass });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.pass == Some(false))
    }

    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        let single = self.ensembles.len() == 1;
        self.ensembles
            .iter()
            .flat_map(|(label, e)| {
                ensemble_summary(e).into_iter().map(move |mut r| {
                    if !single {
                        r.stat_name = format!("{label}:{}", r.stat_name);
                    }
                    r
                })
            })
            .collect()
    }

    /// Writes `report.jsonl`, `summary.csv` and, when present, ensemble and
    /// joint-sample CSVs into `dir`. Every file starts with one header line
    /// carrying `stamp`; the remaining bytes depend only on the outcome.
    pub fn write(&self, dir: &Path, stamp: &str) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let comment = format!("{} {stamp}", self.experiment);
        let single = self.ensembles.len() == 1;
        for (label, e) in &self.ensembles {
            let name = if single { "ensemble.csv".to_string() } else { format!("ensemble-{label}.csv") };
            let mut w = BufWriter::new(File::create(dir.join(name))?);
            write_ensemble_csv(e, &mut w, Some(&comment))?;
            w.flush()?;
        }
        let mut w = BufWriter::new(File::create(dir.join("summary.csv"))?);
        write_summary_csv(&self.summary_rows(), &mut w, Some(&comment))?;
        w.flush()?;
        for (label, samples) in &self.joint {
            let mut w = BufWriter::new(File::create(dir.join(format!("joint-{label}.csv")))?);
            write_joint_csv(samples, &mut w, Some(&comment))?;
            w.flush()?;
        }
        let mut w = BufWriter::new(File::create(dir.join("report.jsonl"))?);
        self.write_report(&mut w, stamp)?;
        w.flush()
    }

    pub fn write_report<W: Write>(&self, w: &mut W, stamp: &str) -> io::Result<()> {
        let header = serde_json::json!({ "experiment": self.experiment, "generated": stamp });
        writeln!(w, "{header}")?;
        for c in &self.checks {
            writeln!(w, "{}", serde_json::to_string(c).map_err(io::Error::other)?)?;
        }
        Ok(())
    }
}
