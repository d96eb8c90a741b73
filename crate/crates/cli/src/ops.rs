//! Operator selection and application for 1D and 2D inputs.

use serde::Serialize;
use upspec::alias::{alias_energy, alias_energy2, analyze, contribution_map, AliasReport};
use upspec::fit::{fit_closed_form, lctc_fit, FitProblem, LCTC_SMALL_SIZE};
use upspec::upsample::{
    bed_of_nails2, bilinear, fourier_pad_upsample2, nearest2, pixel_shuffle, pixel_shuffle2,
    transposed_conv2, BoundaryMode, KernelSpec, KernelSpec2, UpsampleFactor, Upsampler,
};
use upspec::{Image, Signal};

use crate::error::{CliError, CliResult};
use crate::rng::SampleRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    BedOfNails,
    Nearest,
    Linear,
    FourierPad,
    TransposedConv,
    Lctc,
    PixelShuffle,
}

impl OpKind {
    pub const ALL: [OpKind; 7] = [
        OpKind::BedOfNails,
        OpKind::Nearest,
        OpKind::Linear,
        OpKind::FourierPad,
        OpKind::TransposedConv,
        OpKind::Lctc,
        OpKind::PixelShuffle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::BedOfNails => "bed_of_nails",
            OpKind::Nearest => "nearest",
            OpKind::Linear => "linear",
            OpKind::FourierPad => "fourier_pad",
            OpKind::TransposedConv => "transposed_conv",
            OpKind::Lctc => "lctc",
            OpKind::PixelShuffle => "pixel_shuffle",
        }
    }
}

impl std::str::FromStr for OpKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let key = s.trim().replace('-', "_");
        OpKind::ALL
            .into_iter()
            .find(|op| op.name() == key)
            .or(match key.as_str() {
                "bon" | "zero_insertion" => Some(OpKind::BedOfNails),
                "bilinear" => Some(OpKind::Linear),
                "ideal" => Some(OpKind::FourierPad),
                "tconv" => Some(OpKind::TransposedConv),
                _ => None,
            })
            .ok_or_else(|| CliError::Usage(format!("unknown operator `{s}`")))
    }
}

/// Where transposed-convolution weights come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum KernelInit {
    /// Closed-form least-squares fit to the ideal upsampler.
    #[default]
    Fitted,
    Ones,
    /// Linear-interpolation triangle; its size is fixed at `2r − 1`.
    Triangle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelParams {
    pub kernel_size: usize,
    pub stride: usize,
    pub parallel_small: Option<usize>,
    pub init: KernelInit,
    pub boundary: Boundary,
}

/// Serializable mirror of [`BoundaryMode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    Periodic,
    ZeroPad,
}

impl From<Boundary> for BoundaryMode {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Periodic => BoundaryMode::Periodic,
            Boundary::ZeroPad => BoundaryMode::ZeroPad,
        }
    }
}

impl KernelParams {
    pub fn factor(&self) -> CliResult<UpsampleFactor> {
        Ok(UpsampleFactor::new(self.stride)?)
    }

    /// Builds the 1D kernel used for a period-`n` input.
    pub fn kernel(&self, op: OpKind, n: usize) -> CliResult<KernelSpec> {
        let r = self.factor()?;
        let k = self.kernel_size;
        let small = match op {
            OpKind::Lctc => Some(self.parallel_small.unwrap_or(LCTC_SMALL_SIZE)),
            _ => self.parallel_small,
        };
        match self.init {
            KernelInit::Fitted => {
                let mut p = FitProblem::new(n, r, k)?;
                if let Some(s) = small {
                    p = p.with_parallel_small(s)?;
                }
                let fit = if op == OpKind::Lctc {
                    lctc_fit(&p)?
                } else {
                    fit_closed_form(&p)?
                };
                Ok(fit.kernel)
            }
            KernelInit::Ones | KernelInit::Triangle => {
                let base = if self.init == KernelInit::Ones {
                    KernelSpec::ones(k, r.get())?
                } else {
                    KernelSpec::triangle(r.get())?
                };
                match small {
                    Some(s) => Ok(base.with_parallel_small(vec![1.0; s])?),
                    None => Ok(base),
                }
            }
        }
    }

    pub fn describe(&self, op: OpKind) -> String {
        let base = format!("r={}", self.stride);
        match op {
            OpKind::TransposedConv | OpKind::Lctc => {
                let mut s = format!(
                    "{base};K={};kernel={}",
                    self.kernel_size,
                    match self.init {
                        KernelInit::Fitted => "fitted",
                        KernelInit::Ones => "ones",
                        KernelInit::Triangle => "triangle",
                    }
                );
                let small = if op == OpKind::Lctc {
                    Some(self.parallel_small.unwrap_or(LCTC_SMALL_SIZE))
                } else {
                    self.parallel_small
                };
                if let Some(p) = small {
                    s.push_str(&format!(";small={p}"));
                }
                s
            }
            _ => base,
        }
    }
}

/// Result of one operator on one input.
#[derive(Debug, Clone)]
pub struct Applied {
    pub op: OpKind,
    pub output: Output,
    pub report: AliasReport,
    pub contribution_variance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Signal(Signal),
    Image(Image),
}

/// Extra channels for pixel shuffle: seeded Gaussian noise scaled to the
/// input's RMS, standing in for unrelated feature maps.
fn noise_channels(count: usize, len: usize, rms: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SampleRng::new(seed ^ 0x5eed_5eed_5eed_5eed);
    let scale = if rms > 0.0 { rms } else { 1.0 };
    (0..count)
        .map(|_| (0..len).map(|_| scale * rng.normal()).collect())
        .collect()
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

pub fn apply_signal(
    x: &Signal,
    op: OpKind,
    params: &KernelParams,
    seed: u64,
) -> CliResult<Applied> {
    let r = params.factor()?;
    let boundary = params.boundary.into();
    let upsampler = match op {
        OpKind::BedOfNails => Some(Upsampler::BedOfNails(r)),
        OpKind::Nearest => Some(Upsampler::Nearest(r)),
        OpKind::Linear => Some(Upsampler::Linear(r, boundary)),
        OpKind::FourierPad => Some(Upsampler::FourierPad(r)),
        OpKind::TransposedConv | OpKind::Lctc => Some(Upsampler::TransposedConv(
            params.kernel(op, x.len())?,
            boundary,
        )),
        OpKind::PixelShuffle => None,
    };
    match upsampler {
        Some(u) => {
            let output = u.apply(x)?;
            let report = analyze(x, &u)?;
            let contribution_variance = match &u {
                Upsampler::TransposedConv(k, _) => {
                    Some(contribution_map(k, output.len())?.variance)
                }
                _ => None,
            };
            Ok(Applied {
                op,
                output: Output::Signal(output),
                report,
                contribution_variance,
            })
        }
        None => {
            let mut channels = vec![x.clone()];
            for c in noise_channels(r.get() - 1, x.len(), rms(x.samples()), seed) {
                channels.push(Signal::new(c)?);
            }
            let output = pixel_shuffle(&channels, r)?;
            let report = alias_energy(&output, r.get())?;
            Ok(Applied {
                op,
                output: Output::Signal(output),
                report,
                contribution_variance: None,
            })
        }
    }
}

pub fn apply_image(
    img: &Image,
    op: OpKind,
    params: &KernelParams,
    seed: u64,
) -> CliResult<Applied> {
    let r = params.factor()?;
    let boundary = params.boundary.into();
    let mut variance = None;
    let output = match op {
        OpKind::BedOfNails => bed_of_nails2(img, r),
        OpKind::Nearest => nearest2(img, r),
        OpKind::Linear => bilinear(img, r, boundary),
        OpKind::FourierPad => fourier_pad_upsample2(img, r)?,
        OpKind::TransposedConv | OpKind::Lctc => {
            // fitted for the row period; exact for square inputs
            let k1 = params.kernel(op, img.width())?;
            let mut k2 = KernelSpec2::outer(&k1, &k1)?;
            if let Some(small) = k1.parallel_small() {
                let s = KernelSpec::new(small.to_vec(), r.get())?;
                let s2 = KernelSpec2::outer(&s, &s)?;
                k2 = KernelSpec2::new(k2.size(), k2.weights().to_vec(), r.get())?
                    .with_parallel_small(s2.size(), s2.weights().to_vec())?;
            }
            variance = Some(
                upspec::alias::contribution_map2(
                    &k2,
                    img.height() * r.get(),
                    img.width() * r.get(),
                )?
                .variance,
            );
            transposed_conv2(img, &k2, boundary)
        }
        OpKind::PixelShuffle => {
            let (h, w, c) = img.shape();
            let mut chans = vec![img.clone()];
            for noise in noise_channels(r.get() * r.get() - 1, h * w * c, rms(img.data()), seed) {
                chans.push(Image::new(h, w, c, noise)?);
            }
            pixel_shuffle2(&chans, r)?
        }
    };
    let report = alias_energy2(&output, r.get())?;
    Ok(Applied {
        op,
        output: Output::Image(output),
        report,
        contribution_variance: variance,
    })
}
