//! Resolves command-line options and a config file into experiment runs.

use std::io::Write;
use std::path::PathBuf;

use crate::config::{ConfigError, ConfigFile, Params, Section, GLOBAL_KEYS};
use crate::experiments::{self, Experiment, RunError};
use crate::report::Outcome;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub experiment: Option<String>,
}

pub struct Job {
    pub experiment: &'static Experiment,
    pub params: Params,
    pub seed: u64,
}

pub struct Plan {
    pub jobs: Vec<Job>,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

fn parse_global<T: std::str::FromStr>(s: &Section, key: &str) -> Result<Option<T>, ConfigError> {
    s.entries
        .get(key)
        .map(|e| {
            e.value.parse().map_err(|_| ConfigError::Field {
                line: Some(e.line),
                field: key.to_string(),
                msg: format!("cannot parse `{}`", e.value),
            })
        })
        .transpose()
}

fn job(exp: &'static Experiment, section: Option<&Section>, global_seed: Option<u64>, cli_seed: Option<u64>) -> Result<Job, ConfigError> {
    let mut section_seed = None;
    let params = match section {
        Some(s) => {
            let mut s = s.clone();
            if let Some(e) = s.entries.remove("seed") {
                section_seed = Some(e.value.parse::<u64>().map_err(|_| ConfigError::Field {
                    line: Some(e.line),
                    field: format!("{}.seed", s.name),
                    msg: format!("cannot parse `{}`", e.value),
                })?);
            }
            Params::from_section(&s, exp.schema)?
        }
        None => exp.defaults(),
    };
    let seed = cli_seed.or(section_seed).or(global_seed).unwrap_or(exp.default_seed);
    Ok(Job { experiment: exp, params, seed })
}

pub fn plan(opts: &Options) -> Result<Plan, ConfigError> {
    let cfg = match &opts.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    for (key, entry) in &cfg.global.entries {
        if !GLOBAL_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line: entry.line, section: "global".into(), key: key.clone() });
        }
    }
    for s in &cfg.sections {
        if experiments::find(&s.name).is_none() {
            return Err(ConfigError::UnknownSection { line: s.line, section: s.name.clone() });
        }
    }
    let global_seed = parse_global::<u64>(&cfg.global, "seed")?;
    let threads = match opts.threads {
        Some(t) => Some(t),
        None => parse_global::<usize>(&cfg.global, "threads")?,
    };
    if threads == Some(0) {
        return Err(ConfigError::Field { line: None, field: "threads".into(), msg: "must be at least 1".into() });
    }
    let out = opts
        .out
        .clone()
        .or_else(|| cfg.global.entries.get("out").map(|e| PathBuf::from(&e.value)))
        .unwrap_or_else(|| PathBuf::from("results"));

    let jobs = match &opts.experiment {
        Some(name) => {
            let exp = experiments::find(name).ok_or_else(|| ConfigError::UnknownExperiment(name.clone()))?;
            vec![job(exp, cfg.section(name), global_seed, opts.seed)?]
        }
        None => cfg
            .sections
            .iter()
            .map(|s| job(experiments::find(&s.name).expect("checked"), Some(s), global_seed, opts.seed))
            .collect::<Result<_, _>>()?,
    };
    if jobs.is_empty() {
        return Err(ConfigError::Field {
            line: None,
            field: "experiment".into(),
            msg: "nothing to run: pass --experiment or a config with experiment sections".into(),
        });
    }
    Ok(Plan { jobs, out, threads })
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl Job {
    pub fn run(&self) -> Result<Outcome, RunError> {
        self.experiment.run(&self.params, self.seed)
    }
}

/// Runs every job in order, writing outputs under `plan.out/<experiment>/`.
/// Returns the process exit status.
pub fn execute<W: Write, E: Write>(plan: &Plan, stdout: &mut W, stderr: &mut E) -> i32 {
    let pool = match plan.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => Some(pool),
            Err(e) => {
                let _ = writeln!(stderr, "error: thread pool: {e}");
                return EXIT_ERROR;
            }
        },
        None => None,
    };
    let mut status = EXIT_PASS;
    for job in &plan.jobs {
        let name = job.experiment.name;
        let result = match &pool {
            Some(pool) => pool.install(|| job.run()),
            None => job.run(),
        };
        let outcome = match result {
            Ok(o) => o,
            Err(e) => {
                let _ = writeln!(stderr, "error: {name}: {e}");
                return EXIT_ERROR;
            }
        };
        let dir = plan.out.join(name);
        let stamp = format!("generated {} seed {}", timestamp(), job.seed);
        if let Err(e) = outcome.write(&dir, &stamp) {
            let _ = writeln!(stderr, "error: writing {}: {e}", dir.display());
            return EXIT_ERROR;
        }
        let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(stdout, "{name}: {verdict} ({} checks, seed {})", outcome.checks.len(), job.seed);
        for c in outcome.failures() {
            let _ = writeln!(stdout, "  failed {}: {}", c.quantity, c.value);
        }
        if !outcome.passed() {
            status = EXIT_FAIL;
        }
    }
    status
}

pub fn list<W: Write>(w: &mut W) -> std::io::Result<()> {
    for e in experiments::all() {
        writeln!(w, "{:<22} {}", e.name, e.about)?;
    }
    Ok(())
}
