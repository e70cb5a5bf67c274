//! Named experiments, their configuration and their reports.
//!
//! Every experiment implements [`Experiment`] and is looked up by name in a
//! [`Registry`]. Trials draw from generators seeded with `seed ^ trial`, run
//! in parallel, and are reassembled in trial order, so a fixed configuration
//! gives byte-identical CSV.

mod config;
pub mod experiments;
pub mod inputs;
mod report;

pub use config::{EpsPolicy, ExperimentConfig, Inputs};
pub use report::{summarize, Cell, GridStats, Report, ReportBuilder, Stats, Summary};

use crate::error::{Error, Result};

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report>;
}

pub struct Registry {
    entries: Vec<Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// All built-in experiments.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(experiments::Domination));
        r.register(Box::new(experiments::TailEstimate));
        r.register(Box::new(experiments::DiagonalEstimate));
        r.register(Box::new(experiments::Decay));
        r.register(Box::new(experiments::Weighted));
        r.register(Box::new(experiments::VectorValued));
        r.register(Box::new(experiments::Indices));
        r
    }

    /// Adds an experiment, replacing any with the same name.
    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Experiment> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::Unknown { kind: "experiment", name: name.into() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn run(&self, name: &str, cfg: &ExperimentConfig) -> Result<Report> {
        self.get(name)?.run(cfg)
    }
}

/// Process exit code for a finished run.
pub fn exit_code(result: &Result<Report>) -> i32 {
    match result {
        Ok(_) => 0,
        Err(e) if e.is_threshold_failure() => 3,
        Err(_) => 2,
    }
}

pub fn run_domination(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::Domination.run(cfg)
}

pub fn run_prop41(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::TailEstimate.run(cfg)
}

pub fn run_prop42(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::DiagonalEstimate.run(cfg)
}

pub fn run_decay(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::Decay.run(cfg)
}

pub fn run_weights(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::Weighted.run(cfg)
}

pub fn run_vector_valued(cfg: &ExperimentConfig) -> Result<Report> {
    experiments::VectorValued.run(cfg)
}
