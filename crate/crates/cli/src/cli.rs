//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::run::{self, Options, EXIT_ERROR, EXIT_PASS};

#[derive(Parser, Debug)]
#[command(name = "heis-experiments", version, about = "Coupling experiments on the Heisenberg group")]
pub struct Cli {
    /// Configuration file with one [section] per experiment.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Run a single experiment.
    #[arg(long, value_name = "NAME")]
    pub experiment: Option<String>,
    /// List the built-in experiments and exit.
    #[arg(long)]
    pub list: bool,
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return status;
        }
    };
    if cli.list {
        return match run::list(stdout) {
            Ok(()) => EXIT_PASS,
            Err(_) => EXIT_ERROR,
        };
    }
    let opts = Options { config: cli.config, seed: cli.seed, threads: cli.threads, out: cli.out, experiment: cli.experiment };
    match run::plan(&opts) {
        Ok(plan) => run::execute(&plan, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "config error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use std::fs;
    use std::path::Path;

    use super::*;

    struct Run {
        status: i32,
        stdout: String,
        stderr: String,
    }

    fn run(args: &[&str]) -> Run {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("heis-experiments").chain(args.iter().copied());
        let status = main_with(argv, &mut out, &mut err);
        Run { status, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
    }

    fn config(dir: &Path, text: &str) -> PathBuf {
        let path = dir.join("run.cfg");
        fs::write(&path, text).unwrap();
        path
    }

    fn bodies(dir: &Path) -> Vec<(String, String)> {
        let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
            .iter()
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .map(|p| {
                let text = fs::read_to_string(p).unwrap();
                let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
                (p.file_name().unwrap().to_string_lossy().into_owned(), body.join("\n"))
            })
            .collect()
    }

    const SMALL_CLOSED: &str = "[closed-forms]\nhorizon = 0.5\ndt = 1e-2\nn_paths = 300\n";

    #[test]
    fn list_and_usage() {
        let r = run(&["--list"]);
        assert_eq!(r.status, 0);
        for name in ["algebra-suite", "scheme-consistency", "kendall-success", "static-ratio", "excursion-moments"] {
            assert!(r.stdout.contains(name), "{name} missing from\n{}", r.stdout);
        }
        assert_eq!(run(&["--help"]).status, 0);
        assert_eq!(run(&["--bogus"]).status, 2);
        assert_eq!(run(&["--seed", "x"]).status, 2);
    }

    #[test]
    fn config_errors_exit_2_with_line_numbers() {
        let tmp = tempfile::tempdir().unwrap();
        let cases = [
            ("[mg-lemma]\nn_pathz = 10\n", "line 2"),
            ("seed = 1\n\n[no-such-experiment]\n", "line 3"),
            ("[closed-forms]\ndt = -1\n", "line 2"),
            ("[closed-forms]\ndt = 0.1\ndt = 0.2\n", "line 3"),
            ("[closed-forms\n", "line 1"),
        ];
        for (text, want) in cases {
            let path = config(tmp.path(), text);
            let r = run(&["--config", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
            assert_eq!(r.status, 2, "{text}");
            assert!(r.stderr.contains(want), "{text}: {}", r.stderr);
        }
        assert_eq!(run(&["--experiment", "nope"]).status, 2);
        assert_eq!(run(&["--config", tmp.path().join("missing.cfg").to_str().unwrap()]).status, 2);
    }

    #[test]
    fn passing_run_writes_outputs() {
        let tmp = tempfile::tempdir().unwrap();
        let path = config(tmp.path(), "[algebra-suite]\ncases = 200\n");
        let out = tmp.path().join("out");
        let r = run(&["--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(r.status, 0, "{}", r.stderr);
        let report = fs::read_to_string(out.join("algebra-suite/report.jsonl")).unwrap();
        let first: serde_json::Value = serde_json::from_str(report.lines().next().unwrap()).unwrap();
        assert_eq!(first["experiment"], "algebra-suite");
        assert!(report.lines().skip(1).all(|l| l.contains("\"quantity\"")));
        assert!(out.join("algebra-suite/summary.csv").exists());
    }

    #[test]
    fn failed_check_exits_1() {
        let tmp = tempfile::tempdir().unwrap();
        let path = config(
            tmp.path(),
            "[kendall-success]\nhorizons = 0.5,1\ndt = 1e-2\nn_paths = 100\nthreshold = 0.999\n",
        );
        let r = run(&["--config", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
        assert_eq!(r.status, 1, "{}", r.stderr);
        assert!(r.stdout.contains("FAIL"));
    }

    #[test]
    fn outputs_depend_on_seed_not_threads() {
        let tmp = tempfile::tempdir().unwrap();
        let path = config(tmp.path(), SMALL_CLOSED);
        let cfg = path.to_str().unwrap();
        let mut runs = Vec::new();
        for (tag, threads) in [("a", "1"), ("b", "3")] {
            let out = tmp.path().join(tag);
            let r = run(&["--config", cfg, "--seed", "42", "--threads", threads, "--out", out.to_str().unwrap()]);
            assert_eq!(r.status, 0, "{}", r.stderr);
            runs.push(bodies(&out.join("closed-forms")));
        }
        assert!(!runs[0].is_empty());
        assert_eq!(runs[0], runs[1]);

        let out = tmp.path().join("c");
        run(&["--config", cfg, "--seed", "43", "--out", out.to_str().unwrap()]);
        assert_ne!(runs[0], bodies(&out.join("closed-forms")));
    }

    #[test]
    fn seed_in_section_and_command_line() {
        let tmp = tempfile::tempdir().unwrap();
        let path = config(tmp.path(), &format!("seed = 7\n{SMALL_CLOSED}seed = 42\n"));
        let cfg = path.to_str().unwrap();
        let r = run(&["--config", cfg, "--out", tmp.path().join("s").to_str().unwrap()]);
        assert!(r.stdout.contains("seed 42"));
        let r = run(&["--config", cfg, "--seed", "5", "--out", tmp.path().join("t").to_str().unwrap()]);
        assert!(r.stdout.contains("seed 5"));
    }
}
