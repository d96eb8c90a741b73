//! Frequency responses of the fixed interpolation rules.
//!
//! Frequencies `ℓ` are in cycles per input sample, so the output of an `r`-fold
//! upsampler spans `ℓ ∈ [0, r)`. The continuous prototypes are the box (nearest)
//! and the width-2 triangle (linear), with responses `sinc(ℓ)` and `sinc²(ℓ)`.
//! The discrete operators respond with the prototype plus its replicas at
//! multiples of `r`; for the triangle this sum has the closed form returned by
//! [`discrete_response`].

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::signal::Signal;
use crate::spectrum::dft;
use crate::upsample::{BoundaryMode, UpsampleFactor, Upsampler};

/// Interpolation rules with an analytic response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResponseMethod {
    BedOfNails,
    Nearest,
    Linear,
}

impl std::str::FromStr for ResponseMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bed_of_nails" | "bed-of-nails" => Ok(ResponseMethod::BedOfNails),
            "nearest" => Ok(ResponseMethod::Nearest),
            "linear" => Ok(ResponseMethod::Linear),
            other => Err(invalid(format!(
                "no analytic response for method `{other}`"
            ))),
        }
    }
}

impl ResponseMethod {
    fn upsampler(self, r: UpsampleFactor) -> Upsampler {
        match self {
            ResponseMethod::BedOfNails => Upsampler::BedOfNails(r),
            ResponseMethod::Nearest => Upsampler::Nearest(r),
            ResponseMethod::Linear => Upsampler::Linear(r, BoundaryMode::Periodic),
        }
    }
}

/// Normalized sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Magnitude response of the continuous interpolation prototype at `ℓ`.
pub fn prototype_response(method: ResponseMethod, ell: f64) -> f64 {
    match method {
        ResponseMethod::BedOfNails => 1.0,
        ResponseMethod::Nearest => sinc(ell).abs(),
        ResponseMethod::Linear => sinc(ell).powi(2),
    }
}

/// `n_points` samples of [`prototype_response`] over `ℓ ∈ [0, r/2]`.
pub fn filter_response(
    method: ResponseMethod,
    r: UpsampleFactor,
    n_points: usize,
) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return Err(invalid("filter_response needs at least two points"));
    }
    let top = r.get() as f64 / 2.0;
    Ok((0..n_points)
        .map(|i| {
            let ell = top * i as f64 / (n_points - 1) as f64;
            (ell, prototype_response(method, ell))
        })
        .collect())
}

/// `|sin(πℓ)/sin(πℓ/r)|`, with its limit `r` where the denominator vanishes.
fn dirichlet_ratio(ell: f64, r: f64) -> f64 {
    let den = (PI * ell / r).sin();
    if den.abs() < 1e-12 {
        // ℓ is a multiple of r; the ratio tends to ±r
        r
    } else {
        ((PI * ell).sin() / den).abs()
    }
}

/// Exact magnitude response of the discrete operator's impulse response.
///
/// Zero insertion is flat at 1; sample repeat is a length-`r` box with response
/// `|sin(πℓ)/sin(πℓ/r)|`; linear interpolation is the sampled triangle with
/// response `(1/r)·(sin(πℓ)/sin(πℓ/r))² = r·Σ_m sinc²(ℓ − r·m)`.
pub fn discrete_response(method: ResponseMethod, r: UpsampleFactor, ell: f64) -> f64 {
    let r = r.get() as f64;
    match method {
        ResponseMethod::BedOfNails => 1.0,
        ResponseMethod::Nearest => dirichlet_ratio(ell, r),
        ResponseMethod::Linear => dirichlet_ratio(ell, r).powi(2) / r,
    }
}

/// One bin of a measured impulse-response spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalBin {
    pub bin: usize,
    /// `bin / N`, cycles per input sample.
    pub frequency: f64,
    pub magnitude: f64,
}

/// `|dft|` of the operator applied to a periodic unit impulse of length `n`.
///
/// Magnitudes are not rescaled: the DC bin of nearest and linear equals `r`,
/// the sum of their discrete kernels.
pub fn empirical_filter_response(
    method: ResponseMethod,
    r: UpsampleFactor,
    n: usize,
) -> Result<Vec<EmpiricalBin>> {
    if n < 4 {
        return Err(invalid(format!("empirical response needs N ≥ 4, got {n}")));
    }
    let y = method.upsampler(r).apply(&Signal::impulse(n)?)?;
    Ok(dft(&y)
        .magnitudes()
        .into_iter()
        .enumerate()
        .map(|(bin, magnitude)| EmpiricalBin {
            bin,
            frequency: bin as f64 / n as f64,
            magnitude,
        })
        .collect())
}
