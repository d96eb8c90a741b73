//! Upsampling operators in 1D and 2D.
//!
//! Every operator is linear. Boundary handling is explicit; periodic mode is
//! the one the spectral identities hold under.

mod fourier;
mod kernel;
mod operator;
mod ops1d;
mod ops2d;

pub use fourier::{fourier_pad_upsample, fourier_pad_upsample2};
pub use kernel::{KernelSpec, KernelSpec2};
pub use operator::{operator_matrix, operator_matrix_with, Upsampler};
pub use ops1d::{bed_of_nails, linear, nearest, pixel_shuffle, pixel_unshuffle, transposed_conv};
pub use ops2d::{
    bed_of_nails2, bilinear, nearest2, pixel_shuffle2, pixel_unshuffle2, transposed_conv2,
};

use crate::error::{invalid, Result};

/// Integer upsampling factor, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpsampleFactor(usize);

impl UpsampleFactor {
    pub fn new(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(invalid(format!(
                "upsampling factor must be at least 2, got {r}"
            )));
        }
        Ok(Self(r))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for UpsampleFactor {
    type Error = crate::Error;

    fn try_from(r: usize) -> Result<Self> {
        Self::new(r)
    }
}

/// How samples beyond the array ends are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum BoundaryMode {
    #[default]
    Periodic,
    ZeroPad,
}

impl std::str::FromStr for BoundaryMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryMode::Periodic),
            "zero-pad" | "zero" | "zeropad" => Ok(BoundaryMode::ZeroPad),
            other => Err(invalid(format!("unknown boundary mode `{other}`"))),
        }
    }
}

/// `x[i]` with out-of-range indices resolved by `mode`.
#[inline]
pub(crate) fn sample_at(x: &[f64], i: isize, mode: BoundaryMode) -> f64 {
    let n = x.len() as isize;
    match mode {
        BoundaryMode::Periodic => x[i.rem_euclid(n) as usize],
        BoundaryMode::ZeroPad => {
            if (0..n).contains(&i) {
                x[i as usize]
            } else {
                0.0
            }
        }
    }
}
