//! Deterministic synthetic inputs.

use num_complex::Complex64 as Cplx;
use serde::Serialize;
use upspec::spectrum::{idft, Convention, Spectrum};
use upspec::{Image, Signal};

use crate::error::{CliError, CliResult};
use crate::rng::SampleRng;

/// One cosine term `amp·cos(2πk·j/N + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub k: f64,
    pub amp: f64,
    pub phase: f64,
}

impl std::str::FromStr for Component {
    type Err = CliError;

    /// Parses `k[:amp[:phase]]`.
    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.is_empty() || parts.len() > 3 {
            return Err(CliError::Usage(format!(
                "bad component `{s}`, expected k[:amp[:phase]]"
            )));
        }
        let num = |i: usize, default: f64| -> CliResult<f64> {
            match parts.get(i) {
                None => Ok(default),
                Some(p) => p
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad number `{p}` in component `{s}`"))),
            }
        };
        Ok(Component {
            k: num(0, 0.0)?,
            amp: num(1, 1.0)?,
            phase: num(2, 0.0)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SignalKind {
    Cosine(Component),
    CosineMixture {
        components: Vec<Component>,
    },
    /// Random spectrum on `|k| ≤ cutoff`.
    BandLimitedNoise {
        cutoff: usize,
    },
    WhiteNoise,
    /// 0 before `N/2`, 1 from there on.
    Step,
    Checkerboard {
        period: usize,
    },
    GaussianBlob {
        sigma: f64,
    },
    /// Vertical step edge plus an oblique sinusoidal texture and weak noise.
    EdgeTexture,
}

impl SignalKind {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            SignalKind::BandLimitedNoise { .. } | SignalKind::WhiteNoise | SignalKind::EdgeTexture
        )
    }

    pub fn is_2d(&self) -> bool {
        matches!(
            self,
            SignalKind::Checkerboard { .. }
                | SignalKind::GaussianBlob { .. }
                | SignalKind::EdgeTexture
        )
    }
}

/// A generator configuration. 1D kinds use `n`; 2D kinds use `height × width`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalSpec {
    #[serde(flatten)]
    pub kind: SignalKind,
    pub n: usize,
    pub height: usize,
    pub width: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Signal(Signal),
    Image(Image),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn cosines(n: usize, comps: &[Component]) -> Vec<f64> {
    use std::f64::consts::PI;
    (0..n)
        .map(|j| {
            comps
                .iter()
                .map(|c| c.amp * (2.0 * PI * c.k * j as f64 / n as f64 + c.phase).cos())
                .sum()
        })
        .collect()
}

fn band_limited(n: usize, cutoff: usize, rng: &mut SampleRng) -> CliResult<Vec<f64>> {
    if 2 * cutoff >= n {
        return Err(usage(format!(
            "band-limited noise needs cutoff < N/2, got cutoff {cutoff} for N {n}"
        )));
    }
    // unit expected power per sample
    let scale = n as f64 / ((2 * cutoff + 1) as f64).sqrt();
    let mut coeffs = vec![Cplx::new(0.0, 0.0); n];
    coeffs[0] = Cplx::new(rng.normal() * scale, 0.0);
    let half = std::f64::consts::FRAC_1_SQRT_2 * scale;
    for k in 1..=cutoff {
        let c = Cplx::new(rng.normal() * half, rng.normal() * half);
        coeffs[k] = c;
        coeffs[n - k] = c.conj();
    }
    let spectrum = Spectrum::new(coeffs, Convention::Unshifted)?;
    Ok(idft(&spectrum)?.into_samples())
}

impl SignalSpec {
    pub fn generate(&self) -> CliResult<Generated> {
        let mut rng = match (self.kind.is_random(), self.seed) {
            (true, None) => return Err(usage("a seed is required for random generators")),
            (_, seed) => SampleRng::new(seed.unwrap_or(0)),
        };
        if self.kind.is_2d() {
            let (h, w) = (self.height, self.width);
            if h == 0 || w == 0 {
                return Err(usage("image size must be positive"));
            }
            let data = match &self.kind {
                SignalKind::Checkerboard { period } => {
                    if *period == 0 {
                        return Err(usage("checkerboard period must be positive"));
                    }
                    (0..h * w)
                        .map(|i| (((i / w) / period + (i % w) / period) % 2) as f64)
                        .collect()
                }
                SignalKind::GaussianBlob { sigma } => {
                    if sigma.is_nan() || *sigma <= 0.0 {
                        return Err(usage("blob sigma must be positive"));
                    }
                    let (cy, cx) = ((h as f64 - 1.0) / 2.0, (w as f64 - 1.0) / 2.0);
                    (0..h * w)
                        .map(|i| {
                            let dy = (i / w) as f64 - cy;
                            let dx = (i % w) as f64 - cx;
                            (-(dy * dy + dx * dx) / (2.0 * sigma * sigma)).exp()
                        })
                        .collect()
                }
                SignalKind::EdgeTexture => {
                    use std::f64::consts::PI;
                    (0..h * w)
                        .map(|i| {
                            let (y, x) = ((i / w) as f64, (i % w) as f64);
                            let edge = if 2 * (i % w) >= w { 1.0 } else { 0.0 };
                            let texture =
                                0.25 * (2.0 * PI * (3.0 * x / w as f64 + 2.0 * y / h as f64)).sin();
                            edge + texture + 0.05 * rng.normal()
                        })
                        .collect()
                }
                _ => unreachable!(),
            };
            return Ok(Generated::Image(Image::new(h, w, 1, data)?));
        }
        let n = self.n;
        if n == 0 {
            return Err(usage("signal length must be positive"));
        }
        let samples = match &self.kind {
            SignalKind::Cosine(c) => cosines(n, std::slice::from_ref(c)),
            SignalKind::CosineMixture { components } => {
                if components.is_empty() {
                    return Err(usage("cosine mixture needs at least one component"));
                }
                cosines(n, components)
            }
            SignalKind::BandLimitedNoise { cutoff } => band_limited(n, *cutoff, &mut rng)?,
            SignalKind::WhiteNoise => (0..n).map(|_| rng.normal()).collect(),
            SignalKind::Step => (0..n).map(|j| if 2 * j >= n { 1.0 } else { 0.0 }).collect(),
            _ => unreachable!(),
        };
        Ok(Generated::Signal(Signal::new(samples)?))
    }
}
