//! Built-in experiments. Each declares its configuration keys with
//! defaults sized for a full run, and reports pass/fail checks.

use heis_coupling::coupling::{CouplingError, StrategyPolicy};
use heis_coupling::estimators::EstimatorError;
use heis_coupling::group::GroupError;
use heis_coupling::sim::SimError;
use heis_coupling::static_coupling::StaticError;
use thiserror::Error;

use crate::config::{ConfigError, Params};
use crate::report::Outcome;

mod algebra;
mod blowup;
mod lemmas;
mod reflection;
mod schemes;
mod statics;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation: {0}")]
    Sim(#[from] SimError),
    #[error("estimator: {0}")]
    Estimator(#[from] EstimatorError),
    #[error("static coupling: {0}")]
    Static(#[from] StaticError),
    #[error("coupling: {0}")]
    Coupling(#[from] CouplingError),
    #[error("group: {0}")]
    Group(#[from] GroupError),
}

pub type Schema = &'static [(&'static str, &'static str)];

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub schema: Schema,
    pub default_seed: u64,
    run: fn(&Params, u64) -> Result<Outcome, RunError>,
}

impl Experiment {
    pub fn defaults(&self) -> Params {
        Params::defaults(self.name, self.schema)
    }

    pub fn run(&self, params: &Params, seed: u64) -> Result<Outcome, RunError> {
        (self.run)(params, seed)
    }
}

macro_rules! experiment {
    ($name:expr, $about:expr, $module:ident :: $schema:ident, $run:expr, $seed:expr) => {
        Experiment { name: $name, about: $about, schema: $module::$schema, default_seed: $seed, run: $run }
    };
}

static EXPERIMENTS: &[Experiment] = &[
    experiment!("algebra-suite", "group law, distance and dilation identities", algebra::ALGEBRA, algebra::algebra_suite, 1),
    experiment!("matrix-lemmas", "frame change, validation and Ĵ completion", algebra::MATRIX, algebra::matrix_lemmas, 2),
    experiment!("scheme-consistency", "full vs reduced simulators by two-sample KS", schemes::CONSISTENCY, schemes::scheme_consistency, 3),
    experiment!("closed-forms", "synchronous and perverse couplings against closed forms", schemes::CLOSED, schemes::closed_forms, 4),
    experiment!("reflection-exponents", "growth exponents of E|Z_t|^p under reflection", reflection::EXPONENTS, reflection::reflection_exponents, 5),
    experiment!("reflection-hitting", "contact time law of the reflection coupling", reflection::HITTING, reflection::reflection_hitting, 6),
    experiment!("blowup-synchronous", "E d_H² growth under the synchronous coupling", blowup::BLOWUP, blowup::blowup_synchronous, 7),
    experiment!("blowup-reflection", "E d_H² growth under the reflection coupling", blowup::BLOWUP, blowup::blowup_reflection, 7),
    experiment!("blowup-perverse", "E d_H² growth under the perverse coupling", blowup::BLOWUP, blowup::blowup_perverse, 7),
    experiment!("kendall-success", "success fraction of the hysteresis coupling", blowup::KENDALL, blowup::kendall_success, 8),
    experiment!("static-ratio", "static coupling: pinning, marginals and cost ratio", statics::RATIO, statics::static_ratio, 9),
    experiment!("static-baseline", "translation coupling cost exponent in x′", statics::BASELINE, statics::static_baseline, 9),
    experiment!("mg-lemma", "martingale lower bound and the a_p constant", lemmas::MG, lemmas::mg_lemma, 10),
    experiment!("transport-lemma", "square-root transport cost of a shifted sample", statics::TRANSPORT, statics::transport_lemma, 11),
    experiment!("h2-smoke", "synchronous and reflection identities in ℍ₂", schemes::H2, schemes::h2_smoke, 12),
    experiment!("excursion-moments", "moments of the squared excursion integral", lemmas::EXCURSION, lemmas::excursion_moments, 13),
];

pub fn all() -> &'static [Experiment] {
    EXPERIMENTS
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

/// The coupling named by `strategy`, with `kappa`/`epsilon` for Kendall.
pub(crate) fn policy(name: &str, n: usize, p: &Params) -> Result<StrategyPolicy, RunError> {
    Ok(match name {
        "synchronous" => StrategyPolicy::synchronous(n),
        "reflection" => StrategyPolicy::reflection(n),
        "perverse" => StrategyPolicy::perverse(n),
        "kendall" => StrategyPolicy::kendall(n, p.positive("kappa")?, p.positive("epsilon")?)
            .map_err(|e| p.invalid("epsilon", e.to_string()))?,
        other => return Err(ConfigError::Field { line: None, field: "strategy".into(), msg: format!("unknown `{other}`") }.into()),
    })
}

/// `(lo, hi)` from a two-element list.
pub(crate) fn window(p: &Params, key: &str) -> Result<(f64, f64), RunError> {
    match p.positive_list(key)?.as_slice() {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(p.invalid(key, "expected `lo, hi` with lo < hi").into()),
    }
}
