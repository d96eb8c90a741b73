use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::generate::SignalSpec;
use crate::ops::{KernelParams, OpKind};
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Compare,
    Contribution,
    Fit,
    Sweep,
    Errorspec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    #[default]
    Closed,
    Gd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitParams {
    pub mode: FitMode,
    pub lr: Option<f64>,
    pub max_iter: usize,
    pub tol: f64,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Average {
    #[default]
    Complex,
    Magnitude,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSpecParams {
    pub pred: Option<PathBuf>,
    pub gt: Option<PathBuf>,
    pub average: Average,
    pub floor: f64,
}

/// Everything that determines a run's outputs.
///
/// The output directory and execution mode are left out of the hash: they
/// change where and how results are computed, not what they are.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub operators: Vec<OpKind>,
    pub kernel: KernelParams,
    pub signal: SignalSpec,
    pub fit: FitParams,
    pub errorspec: ErrorSpecParams,
    pub formats: BTreeSet<Format>,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub sequential: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.formats.is_empty() {
            return Err(CliError::Usage(
                "at least one output format is required".into(),
            ));
        }
        if self.uses_generator() && self.signal.kind.is_random() && self.signal.seed.is_none() {
            return Err(CliError::Usage(format!(
                "--seed is required for the random generator `{}`",
                self.signal_kind_name()
            )));
        }
        if self.operators.is_empty() {
            return Err(CliError::Usage("at least one operator is required".into()));
        }
        Ok(())
    }

    /// Whether the command draws its input from the signal generator.
    pub fn uses_generator(&self) -> bool {
        match self.command {
            Command::Analyze | Command::Compare => true,
            Command::Errorspec => self.errorspec.pred.is_none() && self.errorspec.gt.is_none(),
            Command::Contribution | Command::Fit | Command::Sweep => false,
        }
    }

    pub fn signal_kind_name(&self) -> String {
        serde_json::to_value(&self.signal)
            .ok()
            .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_owned))
            .unwrap_or_default()
    }

    /// Hex SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn execution(&self) -> upspec::Execution {
        if self.sequential {
            upspec::Execution::Sequential
        } else {
            upspec::Execution::default()
        }
    }
}
