use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::signal::Image;
use crate::spectrum::{center_shift2, dft2_plane, Convention, Spectrum2};

/// How per-channel spectra of the residual are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelAverage {
    /// Mean of the complex coefficients, then magnitude.
    #[default]
    Complex,
    /// Mean of the per-channel magnitudes.
    Magnitude,
}

/// Centered spectrum of a prediction error.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpectrum {
    pub rows: usize,
    pub cols: usize,
    /// Centered magnitudes, row-major.
    pub magnitude: Vec<f64>,
    /// `log10(magnitude + floor)`.
    pub log_magnitude: Vec<f64>,
}

impl ErrorSpectrum {
    /// The log-magnitude as a single-channel image.
    pub fn to_image(&self) -> Image {
        Image::new(self.rows, self.cols, 1, self.log_magnitude.clone())
            .expect("log magnitudes are finite")
    }
}

/// `(1/C)·Σ_c dft2(pred_c − gt_c)`, centered, with its log magnitude.
pub fn error_spectrum(
    pred: &Image,
    gt: &Image,
    average: ChannelAverage,
    floor: f64,
) -> Result<ErrorSpectrum> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(invalid(format!("log floor must be positive, got {floor}")));
    }
    let diff = pred.sub(gt)?;
    let (h, w, c) = diff.shape();
    let spectra: Vec<Spectrum2> = diff
        .planes()
        .iter()
        .map(|p| dft2_plane(h, w, p))
        .collect::<Result<_>>()?;
    let scale = 1.0 / c as f64;
    let magnitude_unshifted: Vec<Complex64> = (0..h * w)
        .map(|i| match average {
            ChannelAverage::Complex => {
                let sum: Complex64 = spectra.iter().map(|s| s.coefficients()[i]).sum();
                Complex64::new((sum * scale).norm(), 0.0)
            }
            ChannelAverage::Magnitude => {
                let sum: f64 = spectra.iter().map(|s| s.coefficients()[i].norm()).sum();
                Complex64::new(sum * scale, 0.0)
            }
        })
        .collect();
    let centered = center_shift2(&Spectrum2::new(
        h,
        w,
        magnitude_unshifted,
        Convention::Unshifted,
    )?);
    let magnitude: Vec<f64> = centered.coefficients().iter().map(|z| z.re).collect();
    let log_magnitude = magnitude.iter().map(|m| (m + floor).log10()).collect();
    Ok(ErrorSpectrum {
        rows: h,
        cols: w,
        magnitude,
        log_magnitude,
    })
}

/// Peak signal-to-noise ratio in dB; `+∞` when the images are identical.
pub fn psnr(pred: &Image, gt: &Image, peak: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(invalid(format!("peak must be positive, got {peak}")));
    }
    pred.check_same_shape(gt)?;
    let n = pred.data().len() as f64;
    let mse = pred
        .data()
        .iter()
        .zip(gt.data())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}
