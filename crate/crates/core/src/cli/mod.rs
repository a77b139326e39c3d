//! Experiment driver behind the `qwalk` binary.
//!
//! A run is described by an [`ExperimentConfig`], assembled from a flat TOML
//! file and command-line flags (flags win). [`run`] computes the requested
//! tables, checks every probability table for normalization, and writes
//! CSV or JSON next to the configured output prefix.

mod config;
mod output;
mod run;

pub use config::{resolve, Args, Command, ConfigFile, ExperimentConfig, Format, OUTPUT_DIR_ENV};
pub use output::format_f64;
pub use run::{run, RunOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(
        "unknown command `{0}` (expected one of spectrum, ctqw-avg, dtqw-avg, trace, theorem1)"
    )]
    UnknownCommand(String),
    #[error("malformed chain specification: {0}")]
    MalformedChain(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Unwritable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),
    #[error("table `{table}` is not normalized: sum = {sum}")]
    Normalization { table: String, sum: f64 },
    #[error("trace of {steps} steps at n = {n} needs {updates} state updates (limit {limit}); pass --force to run it anyway")]
    TraceTooLarge {
        steps: usize,
        n: usize,
        updates: u128,
        limit: u128,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::UnknownCommand(_) => 3,
            CliError::MalformedChain(_) => 4,
            CliError::Config(_) => 5,
            CliError::Unwritable { .. } => 6,
            CliError::Numerical(_) => 7,
            CliError::Normalization { .. } => 8,
            CliError::TraceTooLarge { .. } => 9,
        }
    }
}
