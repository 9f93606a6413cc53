//! Experiment runners for couplings of Heisenberg Brownian motions.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod report;
pub mod run;

pub use config::{ConfigError, ConfigFile, Params};
pub use experiments::{Experiment, RunError};
pub use report::{Check, Outcome};
