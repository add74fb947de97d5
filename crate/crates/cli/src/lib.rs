//! Experiment runner for the `qwalk` command line.

pub mod app;
pub mod emit;
pub mod error;
pub mod experiment;
pub mod golden;

pub use error::{CliError, CliResult};
pub use experiment::{run_experiment, ExperimentKind, ExperimentParams, ExperimentReport};
