//! Upsampling operators and their spectral artifacts.
//!
//! The crate implements the common decoder upsamplers (zero insertion,
//! nearest, linear, pixel shuffle, transposed convolution with an optional
//! parallel small branch, and ideal Fourier zero-padding), measures the alias
//! energy and checkerboard structure they introduce, and fits
//! transposed-convolution kernels to the ideal band-limited interpolator.
//!
//! Batch entry points take an [`Execution`]; the `parallel` feature (on by
//! default) backs [`Execution::Parallel`] with rayon.

pub mod alias;
pub mod error;
pub mod exec;
pub mod fit;
pub mod signal;
pub mod spectrum;
pub mod upsample;

pub use error::{Error, Result};
pub use exec::Execution;
pub use signal::{Image, Signal};
pub use spectrum::{Convention, Spectrum, Spectrum2};
