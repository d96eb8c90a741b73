use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Average, Command, ErrorSpecParams, ExperimentConfig, FitMode, FitParams};
use crate::error::CliResult;
use crate::generate::{Component, SignalKind, SignalSpec};
use crate::ops::{Boundary, KernelInit, KernelParams, OpKind};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "upspec",
    version,
    about = "Spectral analysis of upsampling operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Alias metrics, spectrum and filter response of one operator.
    Analyze(RunArgs),
    /// Every selected operator on the same input, ranked by alias ratio.
    Compare(RunArgs),
    /// Tap-overlap counts of a transposed convolution.
    Contribution(RunArgs),
    /// Fit one transposed-convolution kernel to the ideal upsampler.
    Fit(RunArgs),
    /// Fit residual as a function of kernel size.
    Sweep(RunArgs),
    /// Centered error spectrum between a prediction and a reference image.
    Errorspec(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalArg {
    Cosine,
    CosineMixture,
    #[value(alias = "band-limited")]
    BandLimitedNoise,
    #[value(alias = "noise")]
    WhiteNoise,
    Step,
    Checkerboard,
    GaussianBlob,
    EdgeTexture,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Directory receiving all artifacts.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Seed for random generators; required by them.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "csv,json,pgm"
    )]
    pub format: Vec<Format>,
    /// Run every loop on one thread.
    #[arg(long)]
    pub sequential: bool,

    /// Operators, comma separated. Defaults depend on the command.
    #[arg(long, value_delimiter = ',', value_parser = parse_op)]
    pub op: Vec<OpKind>,
    #[arg(long, default_value_t = 11)]
    pub kernel_size: usize,
    /// Upsampling factor, which is also the transposed-convolution stride.
    #[arg(long, default_value_t = 2)]
    pub stride: usize,
    /// Size of a parallel small kernel branch.
    #[arg(long)]
    pub parallel_small: Option<usize>,
    #[arg(long, value_enum, default_value = "fitted")]
    pub kernel: KernelInit,
    #[arg(long, value_enum, default_value = "periodic")]
    pub boundary: Boundary,

    #[arg(long, value_enum, default_value = "white-noise")]
    pub signal: SignalArg,
    /// Length of 1D signals.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Image height for 2D generators; defaults to `--n`.
    #[arg(long)]
    pub height: Option<usize>,
    /// Image width for 2D generators; defaults to `--n`.
    #[arg(long)]
    pub width: Option<usize>,
    /// Highest frequency of band-limited noise.
    #[arg(long, default_value_t = 4)]
    pub cutoff: usize,
    /// Cosine frequency in cycles per signal.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    /// Cosine-mixture terms as `k[:amp[:phase]]`, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_component, allow_negative_numbers = true)]
    pub components: Vec<Component>,
    #[arg(long, default_value_t = 4)]
    pub period: usize,
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,

    #[arg(long, value_enum, default_value = "closed")]
    pub mode: FitMode,
    /// Gradient-descent step; chosen from the Gram spectrum when absent.
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Kernel sizes for `sweep`, ascending.
    #[arg(long, value_delimiter = ',', default_value = "2,3,7,11,15,32")]
    pub sizes: Vec<usize>,

    /// Prediction image (PGM/PPM) for `errorspec`.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    /// Reference image (PGM/PPM) for `errorspec`.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "complex")]
    pub average: Average,
    /// Floor added before taking log10 of magnitudes.
    #[arg(long, default_value_t = 1e-12)]
    pub floor: f64,
}

fn parse_op(s: &str) -> Result<OpKind, String> {
    s.parse().map_err(|e: crate::error::CliError| e.to_string())
}

fn parse_component(s: &str) -> Result<Component, String> {
    s.parse().map_err(|e: crate::error::CliError| e.to_string())
}

impl Cmd {
    pub fn into_config(self) -> CliResult<ExperimentConfig> {
        let (command, args) = match self {
            Cmd::Analyze(a) => (Command::Analyze, a),
            Cmd::Compare(a) => (Command::Compare, a),
            Cmd::Contribution(a) => (Command::Contribution, a),
            Cmd::Fit(a) => (Command::Fit, a),
            Cmd::Sweep(a) => (Command::Sweep, a),
            Cmd::Errorspec(a) => (Command::Errorspec, a),
        };
        args.into_config(command)
    }
}

impl RunArgs {
    pub fn into_config(self, command: Command) -> CliResult<ExperimentConfig> {
        let kind = match self.signal {
            SignalArg::Cosine => SignalKind::Cosine(Component {
                k: self.k,
                amp: self.amp,
                phase: self.phase,
            }),
            SignalArg::CosineMixture => SignalKind::CosineMixture {
                components: self.components.clone(),
            },
            SignalArg::BandLimitedNoise => SignalKind::BandLimitedNoise {
                cutoff: self.cutoff,
            },
            SignalArg::WhiteNoise => SignalKind::WhiteNoise,
            SignalArg::Step => SignalKind::Step,
            SignalArg::Checkerboard => SignalKind::Checkerboard {
                period: self.period,
            },
            SignalArg::GaussianBlob => SignalKind::GaussianBlob { sigma: self.sigma },
            SignalArg::EdgeTexture => SignalKind::EdgeTexture,
        };
        let operators = if self.op.is_empty() {
            match command {
                Command::Compare => vec![
                    OpKind::BedOfNails,
                    OpKind::Nearest,
                    OpKind::Linear,
                    OpKind::FourierPad,
                    OpKind::TransposedConv,
                ],
                Command::Analyze | Command::Errorspec => vec![OpKind::Linear],
                Command::Contribution | Command::Fit | Command::Sweep => {
                    vec![OpKind::TransposedConv]
                }
            }
        } else {
            let mut seen = Vec::new();
            for op in self.op {
                if !seen.contains(&op) {
                    seen.push(op);
                }
            }
            seen
        };
        let cfg = ExperimentConfig {
            command,
            operators,
            kernel: KernelParams {
                kernel_size: self.kernel_size,
                stride: self.stride,
                parallel_small: self.parallel_small,
                init: self.kernel,
                boundary: self.boundary,
            },
            signal: SignalSpec {
                kind,
                n: self.n,
                height: self.height.unwrap_or(self.n),
                width: self.width.unwrap_or(self.n),
                seed: self.seed,
            },
            fit: FitParams {
                mode: self.mode,
                lr: self.lr,
                max_iter: self.max_iter,
                tol: self.tol,
                sizes: self.sizes,
            },
            errorspec: ErrorSpecParams {
                pred: self.pred,
                gt: self.gt,
                average: self.average,
                floor: self.floor,
            },
            formats: self.format.into_iter().collect::<BTreeSet<_>>(),
            out_dir: self.out_dir,
            sequential: self.sequential,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
