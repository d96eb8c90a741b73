//! Spectral artifact measurements for upsampled signals.
//!
//! Frequencies of an `r·N`-sample output are split on the centered grid into
//! the passband `|k| < N/2`, the Nyquist pair `k = ±N/2` (even `N` only) and
//! the alias band (everything else). Nyquist energy counts as alias in
//! [`AliasReport::alias_ratio`] and is also reported on its own.

mod contribution;
mod error_spectrum;
mod response;

pub use contribution::{contribution_map, contribution_map2, ContributionMap, ContributionMap2};
pub use error_spectrum::{error_spectrum, psnr, ChannelAverage, ErrorSpectrum};
pub use response::{
    discrete_response, empirical_filter_response, filter_response, prototype_response, sinc,
    EmpiricalBin, ResponseMethod,
};

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::signal::{Image, Signal};
use crate::spectrum::{dft, dft2};
use crate::upsample::Upsampler;

/// Energy split of one upsampled signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasReport {
    pub passband_energy: f64,
    /// Everything outside the passband, Nyquist bins included.
    pub alias_energy: f64,
    /// The Nyquist share of `alias_energy`.
    pub nyquist_energy: f64,
    /// `alias / (alias + passband)`, 0 for a zero signal.
    pub alias_ratio: f64,
    /// Max deviation from the zero-insertion replica spectrum, when the input is known.
    pub replica_deviation: Option<f64>,
}

impl AliasReport {
    fn from_energies(passband: f64, alias: f64, nyquist: f64) -> Self {
        let total = passband + alias;
        AliasReport {
            passband_energy: passband,
            alias_energy: alias,
            nyquist_energy: nyquist,
            alias_ratio: if total > 0.0 { alias / total } else { 0.0 },
            replica_deviation: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Band {
    Pass,
    Nyquist,
    Alias,
}

/// Band of signed frequency `k` for a signal upsampled from length `n`.
fn band(k: i64, n: usize) -> Band {
    let twice = 2 * k.unsigned_abs() as usize;
    if twice < n {
        Band::Pass
    } else if twice == n {
        Band::Nyquist
    } else {
        Band::Alias
    }
}

/// Signed frequency of unshifted bin `k` in an `m`-point spectrum.
fn signed(k: usize, m: usize) -> i64 {
    if k < m - m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

fn base_len(len: usize, r: usize, what: &str) -> Result<usize> {
    if r == 0 || !len.is_multiple_of(r) {
        return Err(invalid(format!(
            "{what} length {len} is not divisible by the factor {r}"
        )));
    }
    Ok(len / r)
}

/// Splits the energy of `y`, taken to be upsampled by `r`, into bands.
pub fn alias_energy(y: &Signal, r: usize) -> Result<AliasReport> {
    let n = base_len(y.len(), r, "signal")?;
    let spectrum = dft(y);
    let m = y.len();
    let (mut pass, mut alias, mut nyq) = (0.0, 0.0, 0.0);
    for (k, c) in spectrum.coefficients().iter().enumerate() {
        let e = c.norm_sqr();
        match band(signed(k, m), n) {
            Band::Pass => pass += e,
            Band::Nyquist => {
                nyq += e;
                alias += e;
            }
            Band::Alias => alias += e,
        }
    }
    Ok(AliasReport::from_energies(pass, alias, nyq))
}

/// 2D band split, summed over channels. A bin is alias if either axis is in
/// its alias band, Nyquist if either axis sits on its Nyquist line otherwise.
pub fn alias_energy2(image: &Image, r: usize) -> Result<AliasReport> {
    let (h, w, _) = image.shape();
    let nh = base_len(h, r, "image height")?;
    let nw = base_len(w, r, "image width")?;
    let (mut pass, mut alias, mut nyq) = (0.0, 0.0, 0.0);
    for spectrum in dft2(image) {
        for y in 0..h {
            let by = band(signed(y, h), nh);
            for x in 0..w {
                let bx = band(signed(x, w), nw);
                let e = spectrum.get(y, x).norm_sqr();
                if by == Band::Alias || bx == Band::Alias {
                    alias += e;
                } else if by == Band::Nyquist || bx == Band::Nyquist {
                    alias += e;
                    nyq += e;
                } else {
                    pass += e;
                }
            }
        }
    }
    Ok(AliasReport::from_energies(pass, alias, nyq))
}

/// `max_k |dft(y)[k] − dft(x)[k mod N]|`.
///
/// Zero exactly when `y` is the zero insertion of `x`.
pub fn replica_deviation(x: &Signal, y: &Signal, r: usize) -> Result<f64> {
    if y.len() != x.len() * r {
        return Err(Error::ShapeMismatch {
            expected: format!("length {}", x.len() * r),
            actual: format!("length {}", y.len()),
        });
    }
    let fx = dft(x);
    let fy = dft(y);
    let n = x.len();
    Ok(fy
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| (c - fx.coefficients()[k % n]).norm())
        .fold(0.0, f64::max))
}

/// Applies `op` to `x` and reports both the band split and the replica deviation.
pub fn analyze(x: &Signal, op: &Upsampler) -> Result<AliasReport> {
    let y = op.apply(x)?;
    let r = op.factor();
    let mut report = alias_energy(&y, r)?;
    report.replica_deviation = Some(replica_deviation(x, &y, r)?);
    Ok(report)
}

/// [`analyze`] over a corpus of signals.
pub fn analyze_batch(
    signals: &[Signal],
    op: &Upsampler,
    exec: Execution,
) -> Result<Vec<AliasReport>> {
    exec.try_map(signals, |x| analyze(x, op))
}
