//! Experiment harness for learner-private sequential search: configuration,
//! parallel trial runner, CSV reports and the `privsearch` command line.

pub mod cli;
pub mod config;
pub mod curves;
pub mod error;
pub mod experiment;
pub mod report;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, ExperimentReport, Row};
