use std::path::PathBuf;

use serde::Serialize;
use upspec::alias::{
    contribution_map, contribution_map2, discrete_response, empirical_filter_response,
    error_spectrum, prototype_response, psnr, AliasReport, ChannelAverage, ResponseMethod,
};
use upspec::fit::{
    fit_closed_form_with, fit_gradient_descent, kernel_edge_profile, lctc_fit,
    off_center_sign_changes, EdgeProfile, FitProblem, FitResult, GdOptions, LCTC_SMALL_SIZE,
};
use upspec::spectrum::{
    center_shift, center_shift2, dft, dft2, log_magnitude, log_magnitude2, radial_average,
};
use upspec::upsample::{fourier_pad_upsample, fourier_pad_upsample2, KernelSpec, KernelSpec2};
use upspec::{Execution, Image, Signal};

use crate::config::{Average, Command, ExperimentConfig, FitMode};
use crate::error::{CliError, CliResult};
use crate::generate::Generated;
use crate::netpbm::{bar_strip, read_netpbm, Raster};
use crate::ops::{apply_image, apply_signal, Applied, KernelInit, OpKind, Output};
use crate::output::{num, opt_num, Sink};

const STRIP_HEIGHT: usize = 64;

/// One operator's row in the metrics table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub operator: String,
    pub params: String,
    pub passband_energy: f64,
    pub alias_energy: f64,
    pub nyquist_energy: f64,
    pub alias_ratio: f64,
    pub replica_deviation: Option<f64>,
    pub contribution_variance: Option<f64>,
    /// PSNR against the Fourier-pad output, with the reference's range as peak.
    pub psnr_vs_fourier_pad: f64,
    pub config_hash: String,
}

pub const METRICS_HEADER: [&str; 10] = [
    "operator",
    "params",
    "passband_energy",
    "alias_energy",
    "nyquist_energy",
    "alias_ratio",
    "replica_deviation",
    "contribution_variance",
    "psnr_vs_fourier_pad",
    "config_hash",
];

impl MetricsRecord {
    fn row(&self) -> Vec<String> {
        vec![
            self.operator.clone(),
            self.params.clone(),
            num(self.passband_energy),
            num(self.alias_energy),
            num(self.nyquist_energy),
            num(self.alias_ratio),
            opt_num(self.replica_deviation),
            opt_num(self.contribution_variance),
            num(self.psnr_vs_fourier_pad),
            self.config_hash.clone(),
        ]
    }
}

/// Outcome of a run: metrics rows (when the command has any) and written paths.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub records: Vec<MetricsRecord>,
    pub files: Vec<PathBuf>,
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    match cfg.command {
        Command::Analyze => run_analyze(cfg),
        Command::Compare => run_compare(cfg),
        Command::Contribution => run_contribution(cfg),
        Command::Fit => run_fit(cfg),
        Command::Sweep => run_sweep(cfg),
        Command::Errorspec => run_errorspec(cfg),
    }
}

fn as_image(output: &Output) -> CliResult<Image> {
    Ok(match output {
        Output::Signal(s) => Image::new(1, s.len(), 1, s.samples().to_vec())?,
        Output::Image(i) => i.clone(),
    })
}

fn range_peak(img: &Image) -> f64 {
    let lo = img.data().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = img.data().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        hi - lo
    } else {
        1.0
    }
}

fn reference(input: &Generated, cfg: &ExperimentConfig) -> CliResult<Image> {
    let r = cfg.kernel.factor()?;
    match input {
        Generated::Signal(x) => as_image(&Output::Signal(fourier_pad_upsample(x, r)?)),
        Generated::Image(img) => Ok(fourier_pad_upsample2(img, r)?),
    }
}

fn apply(input: &Generated, op: OpKind, cfg: &ExperimentConfig) -> CliResult<Applied> {
    let seed = cfg.signal.seed.unwrap_or(0);
    match input {
        Generated::Signal(x) => apply_signal(x, op, &cfg.kernel, seed),
        Generated::Image(img) => apply_image(img, op, &cfg.kernel, seed),
    }
}

fn record(
    a: &Applied,
    cfg: &ExperimentConfig,
    hash: &str,
    reference: &Image,
) -> CliResult<MetricsRecord> {
    let out = as_image(&a.output)?;
    let rep: AliasReport = a.report;
    Ok(MetricsRecord {
        operator: a.op.name().to_string(),
        params: cfg.kernel.describe(a.op),
        passband_energy: rep.passband_energy,
        alias_energy: rep.alias_energy,
        nyquist_energy: rep.nyquist_energy,
        alias_ratio: rep.alias_ratio,
        replica_deviation: rep.replica_deviation,
        contribution_variance: a.contribution_variance,
        psnr_vs_fourier_pad: psnr(&out, reference, range_peak(reference))?,
        config_hash: hash.to_string(),
    })
}

/// Centered log-magnitude spectrum rendered as an image.
fn spectrum_raster(output: &Output, floor: f64) -> CliResult<Raster> {
    match output {
        Output::Signal(s) => {
            let logs = log_magnitude(&center_shift(&dft(s)), floor)?;
            let lo = logs.samples().iter().copied().fold(f64::INFINITY, f64::min);
            let lifted: Vec<f64> = logs.samples().iter().map(|v| v - lo).collect();
            bar_strip(&lifted, STRIP_HEIGHT)
        }
        Output::Image(img) => {
            let spec = center_shift2(&dft2(img).swap_remove(0));
            let logs = log_magnitude2(&spec, floor)?;
            Raster::from_values(img.height(), img.width(), 1, &logs)
        }
    }
}

#[derive(Serialize)]
struct MetricsSummary<'a> {
    config: &'a ExperimentConfig,
    records: &'a [MetricsRecord],
}

fn run_compare(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let hash = cfg.hash();
    let input = cfg.signal.generate()?;
    let reference = reference(&input, cfg)?;
    let applied = cfg
        .execution()
        .try_map(&cfg.operators, |&op| apply(&input, op, cfg))?;
    let mut records = applied
        .iter()
        .map(|a| record(a, cfg, &hash, &reference))
        .collect::<CliResult<Vec<_>>>()?;
    records.sort_by(|a, b| a.alias_ratio.total_cmp(&b.alias_ratio));

    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    let rows: Vec<Vec<String>> = records.iter().map(MetricsRecord::row).collect();
    sink.csv("compare_metrics.csv", &METRICS_HEADER, &rows)?;
    sink.json(
        "compare_summary.json",
        &hash,
        &MetricsSummary {
            config: cfg,
            records: &records,
        },
    )?;
    for a in &applied {
        sink.image(
            &format!("spectrum_{}", a.op.name()),
            &spectrum_raster(&a.output, cfg.errorspec.floor)?,
        )?;
    }
    Ok(RunOutput {
        records,
        files: sink.written().to_vec(),
    })
}

fn band_name(freq: i64, n: usize) -> &'static str {
    let twice = 2 * freq.unsigned_abs() as usize;
    match twice.cmp(&n) {
        std::cmp::Ordering::Less => "pass",
        std::cmp::Ordering::Equal => "nyquist",
        std::cmp::Ordering::Greater => "alias",
    }
}

fn response_method(op: OpKind) -> Option<ResponseMethod> {
    match op {
        OpKind::BedOfNails => Some(ResponseMethod::BedOfNails),
        OpKind::Nearest => Some(ResponseMethod::Nearest),
        OpKind::Linear => Some(ResponseMethod::Linear),
        _ => None,
    }
}

fn run_analyze(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let [op] = cfg.operators[..] else {
        return Err(CliError::Usage(format!(
            "analyze takes exactly one operator, got {}",
            cfg.operators.len()
        )));
    };
    let hash = cfg.hash();
    let input = cfg.signal.generate()?;
    let reference = reference(&input, cfg)?;
    let applied = apply(&input, op, cfg)?;
    let rec = record(&applied, cfg, &hash, &reference)?;
    let floor = cfg.errorspec.floor;
    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    sink.csv("analyze_metrics.csv", &METRICS_HEADER, &[rec.row()])?;

    match (&input, &applied.output) {
        (Generated::Signal(x), Output::Signal(y)) => {
            let spec = center_shift(&dft(y));
            let logs = log_magnitude(&spec, floor)?;
            let rows: Vec<Vec<String>> = (0..spec.len())
                .map(|pos| {
                    let f = spec.frequency(pos);
                    vec![
                        f.to_string(),
                        num(f as f64 / x.len() as f64),
                        num(spec.coefficients()[pos].norm()),
                        num(logs.samples()[pos]),
                        band_name(f, x.len()).to_string(),
                    ]
                })
                .collect();
            sink.csv(
                "analyze_spectrum.csv",
                &[
                    "frequency",
                    "cycles_per_input_sample",
                    "magnitude",
                    "log10_magnitude",
                    "band",
                ],
                &rows,
            )?;
            if let (Some(method), true) = (response_method(op), x.len() >= 4) {
                let r = cfg.kernel.factor()?;
                let bins = empirical_filter_response(method, r, x.len())?;
                let rows: Vec<Vec<String>> = bins
                    .iter()
                    .map(|b| {
                        vec![
                            b.bin.to_string(),
                            num(b.frequency),
                            num(b.magnitude),
                            num(discrete_response(method, r, b.frequency)),
                            num(prototype_response(method, b.frequency)),
                        ]
                    })
                    .collect();
                sink.csv(
                    "analyze_response.csv",
                    &[
                        "bin",
                        "cycles_per_input_sample",
                        "empirical",
                        "discrete",
                        "prototype",
                    ],
                    &rows,
                )?;
            }
        }
        (_, Output::Image(img)) => {
            let spec = center_shift2(&dft2(img).swap_remove(0));
            let bins = radial_average(&spec, (img.height().min(img.width()) / 2).max(1))?;
            let rows: Vec<Vec<String>> = bins
                .iter()
                .map(|b| vec![num(b.radius), num(b.mean_magnitude), b.count.to_string()])
                .collect();
            sink.csv(
                "analyze_radial.csv",
                &["radius", "mean_magnitude", "count"],
                &rows,
            )?;
        }
        _ => unreachable!("1D input yields 1D output"),
    }
    let records = vec![rec];
    sink.json(
        "analyze_summary.json",
        &hash,
        &MetricsSummary {
            config: cfg,
            records: &records,
        },
    )?;
    sink.image(
        "analyze_spectrum",
        &spectrum_raster(&applied.output, floor)?,
    )?;
    Ok(RunOutput {
        records,
        files: sink.written().to_vec(),
    })
}

#[derive(Serialize)]
struct ContributionSummary<'a> {
    config: &'a ExperimentConfig,
    output_length: usize,
    period: usize,
    uniform: bool,
    variance: f64,
    stride_divides_kernel: bool,
    counts_per_phase: &'a [usize],
    uniform_2d: bool,
    variance_2d: f64,
}

fn run_contribution(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let hash = cfg.hash();
    let s = cfg.kernel.stride;
    let k = cfg.kernel.kernel_size;
    let mut kernel = KernelSpec::ones(k, s)?;
    let mut kernel2 = KernelSpec2::ones(k, s)?;
    if let Some(p) = cfg.kernel.parallel_small {
        kernel = kernel.with_parallel_small(vec![1.0; p])?;
        kernel2 = kernel2.with_parallel_small(p, vec![1.0; p * p])?;
    }
    let out_len = cfg.signal.n * s;
    let map = contribution_map(&kernel, out_len)?;
    let (rows2, cols2) = (cfg.signal.height * s, cfg.signal.width * s);
    let map2 = contribution_map2(&kernel2, rows2, cols2)?;

    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    let rows: Vec<Vec<String>> = map
        .counts
        .iter()
        .enumerate()
        .map(|(p, c)| vec![p.to_string(), (p % s).to_string(), c.to_string()])
        .collect();
    sink.csv("contribution.csv", &["position", "phase", "count"], &rows)?;
    sink.json(
        "contribution_summary.json",
        &hash,
        &ContributionSummary {
            config: cfg,
            output_length: out_len,
            period: map.period,
            uniform: map.uniform,
            variance: map.variance,
            stride_divides_kernel: map.stride_divides_kernel,
            counts_per_phase: &map.counts[..s.min(map.counts.len())],
            uniform_2d: map2.uniform,
            variance_2d: map2.variance,
        },
    )?;
    let values: Vec<f64> = map2.counts.iter().map(|&c| c as f64).collect();
    sink.image(
        "contribution",
        &Raster::from_values(rows2, cols2, 1, &values)?,
    )?;
    Ok(RunOutput {
        records: Vec::new(),
        files: sink.written().to_vec(),
    })
}

fn fit_problem(cfg: &ExperimentConfig, k: usize) -> CliResult<FitProblem> {
    let mut p = FitProblem::new(cfg.signal.n, cfg.kernel.factor()?, k)?;
    let small = if cfg.operators.contains(&OpKind::Lctc) {
        Some(cfg.kernel.parallel_small.unwrap_or(LCTC_SMALL_SIZE))
    } else {
        cfg.kernel.parallel_small
    };
    if let Some(s) = small {
        p = p.with_parallel_small(s)?;
    }
    Ok(p)
}

fn kernel_rows(kernel: &KernelSpec, prefix: &[String]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let branches = std::iter::once(("large", kernel.weights()))
        .chain(kernel.parallel_small().map(|w| ("small", w)));
    for (branch, w) in branches {
        let anchor = (w.len() / 2) as i64;
        for (i, v) in w.iter().enumerate() {
            let mut row = prefix.to_vec();
            row.extend([
                branch.to_string(),
                i.to_string(),
                (i as i64 - anchor).to_string(),
                num(*v),
            ]);
            rows.push(row);
        }
    }
    rows
}

#[derive(Serialize)]
struct EdgeSummary {
    center_mass: f64,
    edge_mass: f64,
    decays_toward_edge: bool,
}

impl From<EdgeProfile> for EdgeSummary {
    fn from(p: EdgeProfile) -> Self {
        Self {
            center_mass: p.center_mass,
            edge_mass: p.edge_mass,
            decays_toward_edge: p.decays_toward_edge,
        }
    }
}

#[derive(Serialize)]
struct KernelShape {
    edge_profile: Option<EdgeSummary>,
    off_center_sign_changes: usize,
}

fn shape(kernel: &KernelSpec) -> KernelShape {
    KernelShape {
        edge_profile: kernel_edge_profile(kernel).ok().map(EdgeSummary::from),
        off_center_sign_changes: off_center_sign_changes(kernel),
    }
}

#[derive(Serialize)]
struct FitSummary<'a> {
    config: &'a ExperimentConfig,
    residual: f64,
    iterations: usize,
    rank: usize,
    rank_deficient: bool,
    #[serde(flatten)]
    shape: KernelShape,
}

fn run_fit(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    if cfg.kernel.init != KernelInit::Fitted {
        return Err(CliError::Usage(
            "fit always starts from a fitted kernel; drop --kernel".into(),
        ));
    }
    let hash = cfg.hash();
    let problem = fit_problem(cfg, cfg.kernel.kernel_size)?;
    let res: FitResult = match cfg.fit.mode {
        FitMode::Closed if cfg.operators.contains(&OpKind::Lctc) => lctc_fit(&problem)?,
        FitMode::Closed => fit_closed_form_with(&problem, cfg.execution())?,
        FitMode::Gd => fit_gradient_descent(
            &problem,
            &GdOptions {
                lr: cfg.fit.lr,
                max_iter: cfg.fit.max_iter,
                tol: cfg.fit.tol,
                init: None,
            },
        )?,
    };
    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    sink.csv(
        "fit_kernel.csv",
        &["branch", "index", "offset", "weight"],
        &kernel_rows(&res.kernel, &[]),
    )?;
    sink.csv(
        "fit_residual.csv",
        &["kernel_size", "residual"],
        &[vec![cfg.kernel.kernel_size.to_string(), num(res.residual)]],
    )?;
    if let Some(hist) = &res.objective_history {
        let rows: Vec<Vec<String>> = hist
            .iter()
            .enumerate()
            .map(|(i, f)| vec![i.to_string(), num(*f)])
            .collect();
        sink.csv("fit_history.csv", &["iteration", "objective"], &rows)?;
    }
    sink.json(
        "fit_profile.json",
        &hash,
        &FitSummary {
            config: cfg,
            residual: res.residual,
            iterations: res.iterations,
            rank: res.rank,
            rank_deficient: res.rank_deficient,
            shape: shape(&res.kernel),
        },
    )?;
    sink.image(
        "fit_kernel",
        &bar_strip(res.kernel.weights(), STRIP_HEIGHT)?,
    )?;
    Ok(RunOutput {
        records: Vec::new(),
        files: sink.written().to_vec(),
    })
}

#[derive(Serialize)]
struct SweepEntry {
    kernel_size: usize,
    residual: f64,
    #[serde(flatten)]
    shape: KernelShape,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    config: &'a ExperimentConfig,
    non_increasing: bool,
    entries: Vec<SweepEntry>,
}

fn run_sweep(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let sizes = &cfg.fit.sizes;
    if sizes.is_empty() {
        return Err(CliError::Usage(
            "--sizes must name at least one kernel size".into(),
        ));
    }
    if let Some(w) = sizes.windows(2).find(|w| w[1] < w[0]) {
        return Err(CliError::Usage(format!(
            "--sizes must be ascending, found {} after {}",
            w[1], w[0]
        )));
    }
    let hash = cfg.hash();
    let fits = cfg
        .execution()
        .try_map(sizes, |&k| -> CliResult<FitResult> {
            Ok(fit_closed_form_with(
                &fit_problem(cfg, k)?,
                Execution::Sequential,
            )?)
        })?;
    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    let rows: Vec<Vec<String>> = sizes
        .iter()
        .zip(&fits)
        .map(|(k, f)| vec![k.to_string(), num(f.residual)])
        .collect();
    sink.csv("sweep_residuals.csv", &["kernel_size", "residual"], &rows)?;
    let mut krows = Vec::new();
    for (k, f) in sizes.iter().zip(&fits) {
        krows.extend(kernel_rows(&f.kernel, &[k.to_string()]));
    }
    sink.csv(
        "sweep_kernels.csv",
        &["kernel_size", "branch", "index", "offset", "weight"],
        &krows,
    )?;
    let residuals: Vec<f64> = fits.iter().map(|f| f.residual).collect();
    sink.json(
        "sweep_summary.json",
        &hash,
        &SweepSummary {
            config: cfg,
            non_increasing: residuals.windows(2).all(|w| w[1] <= w[0]),
            entries: sizes
                .iter()
                .zip(&fits)
                .map(|(&k, f)| SweepEntry {
                    kernel_size: k,
                    residual: f.residual,
                    shape: shape(&f.kernel),
                })
                .collect(),
        },
    )?;
    sink.image("sweep_residuals", &bar_strip(&residuals, STRIP_HEIGHT)?)?;
    Ok(RunOutput {
        records: Vec::new(),
        files: sink.written().to_vec(),
    })
}

fn raster_image(r: &Raster) -> CliResult<Image> {
    Ok(Image::new(r.height, r.width, r.channels, r.values())?)
}

/// Every `r`-th pixel in both directions.
fn decimate(img: &Image, r: usize) -> CliResult<Image> {
    let (h, w, c) = img.shape();
    if h % r != 0 || w % r != 0 {
        return Err(CliError::Usage(format!(
            "image {h}x{w} is not divisible by the factor {r}"
        )));
    }
    let mut data = Vec::with_capacity(h * w * c / (r * r));
    for y in (0..h).step_by(r) {
        for x in (0..w).step_by(r) {
            for ch in 0..c {
                data.push(img.get(y, x, ch));
            }
        }
    }
    Ok(Image::new(h / r, w / r, c, data)?)
}

#[derive(Serialize)]
struct ErrorSpecSummary<'a> {
    config: &'a ExperimentConfig,
    source: &'static str,
    rows: usize,
    cols: usize,
    min_magnitude: f64,
    max_magnitude: f64,
    mean_magnitude: f64,
    psnr: f64,
}

fn run_errorspec(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let hash = cfg.hash();
    let p = &cfg.errorspec;
    let (pred, gt, source, peak) = match (&p.pred, &p.gt) {
        (Some(pp), Some(gp)) => {
            let pred = raster_image(&read_netpbm(pp)?)?;
            let gt = raster_image(&read_netpbm(gp)?)?;
            (pred, gt, "files", 255.0)
        }
        (None, None) => {
            let [op] = cfg.operators[..] else {
                return Err(CliError::Usage(
                    "errorspec takes exactly one operator".into(),
                ));
            };
            let gt = match cfg.signal.generate()? {
                Generated::Image(img) => img,
                Generated::Signal(_) => return Err(CliError::Usage(
                    "errorspec needs a 2D generator (checkerboard, gaussian-blob, edge-texture)"
                        .into(),
                )),
            };
            let low = decimate(&gt, cfg.kernel.stride)?;
            let pred = as_image(
                &apply_image(&low, op, &cfg.kernel, cfg.signal.seed.unwrap_or(0))?.output,
            )?;
            let peak = range_peak(&gt);
            (pred, gt, "generated", peak)
        }
        _ => {
            return Err(CliError::Usage(
                "--pred and --gt must be given together".into(),
            ))
        }
    };
    let average = match p.average {
        Average::Complex => ChannelAverage::Complex,
        Average::Magnitude => ChannelAverage::Magnitude,
    };
    let es = error_spectrum(&pred, &gt, average, p.floor)?;
    let quality = psnr(&pred, &gt, peak)?;
    let mags = &es.magnitude;
    let mut sink = Sink::new(&cfg.out_dir, &cfg.formats)?;
    let rows: Vec<Vec<String>> = (0..es.rows * es.cols)
        .map(|i| {
            let (y, x) = (i / es.cols, i % es.cols);
            vec![
                (y as i64 - (es.rows / 2) as i64).to_string(),
                (x as i64 - (es.cols / 2) as i64).to_string(),
                num(mags[i]),
                num(es.log_magnitude[i]),
            ]
        })
        .collect();
    sink.csv(
        "errorspec.csv",
        &["freq_y", "freq_x", "magnitude", "log10_magnitude"],
        &rows,
    )?;
    sink.json(
        "errorspec_summary.json",
        &hash,
        &ErrorSpecSummary {
            config: cfg,
            source,
            rows: es.rows,
            cols: es.cols,
            min_magnitude: mags.iter().copied().fold(f64::INFINITY, f64::min),
            max_magnitude: mags.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_magnitude: mags.iter().sum::<f64>() / mags.len() as f64,
            psnr: quality,
        },
    )?;
    sink.image(
        "errorspec",
        &Raster::from_values(es.rows, es.cols, 1, &es.log_magnitude)?,
    )?;
    Ok(RunOutput {
        records: Vec::new(),
        files: sink.written().to_vec(),
    })
}

/// Runs `signal` through the 1D pipeline without touching the filesystem.
pub fn compare_signal(
    x: &Signal,
    ops: &[OpKind],
    cfg: &ExperimentConfig,
) -> CliResult<Vec<MetricsRecord>> {
    let input = Generated::Signal(x.clone());
    let reference = reference(&input, cfg)?;
    let hash = cfg.hash();
    let mut out = ops
        .iter()
        .map(|&op| record(&apply(&input, op, cfg)?, cfg, &hash, &reference))
        .collect::<CliResult<Vec<_>>>()?;
    out.sort_by(|a, b| a.alias_ratio.total_cmp(&b.alias_ratio));
    Ok(out)
}
