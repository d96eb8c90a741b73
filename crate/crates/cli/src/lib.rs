//! Command-line harness for `upspec`: synthetic inputs, experiment runs and
//! byte-stable artifacts (CSV, JSON, binary Netpbm).

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod generate;
pub mod netpbm;
pub mod ops;
pub mod output;
pub mod rng;

pub use commands::{run, MetricsRecord, RunOutput};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
