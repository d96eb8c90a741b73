//! Tap-overlap counts of a transposed convolution.
//!
//! Each input sample spreads `K` taps onto the output. When the stride does not
//! divide `K`, output phases receive different numbers of taps and the result
//! shows a periodic checkerboard.

use crate::error::{invalid, Result};
use crate::upsample::{KernelSpec, KernelSpec2};

#[derive(Debug, Clone, PartialEq)]
pub struct ContributionMap {
    /// Number of (input, tap) pairs landing on each output position.
    pub counts: Vec<usize>,
    /// The stride; counts repeat with this period.
    pub period: usize,
    pub uniform: bool,
    /// Population variance of `counts`.
    pub variance: f64,
    /// Closed-form prediction for the main branch: the stride divides `K`.
    pub stride_divides_kernel: bool,
}

fn variance(counts: &[usize]) -> f64 {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / n
}

fn check_len(len: usize, stride: usize, what: &str) -> Result<()> {
    if len == 0 || !len.is_multiple_of(stride) {
        return Err(invalid(format!(
            "{what} {len} must be a positive multiple of the stride {stride}"
        )));
    }
    Ok(())
}

/// Periodic tap-placement counts for an output of length `out_len`.
///
/// Taps of a parallel branch are counted as well.
pub fn contribution_map(kernel: &KernelSpec, out_len: usize) -> Result<ContributionMap> {
    let s = kernel.stride();
    check_len(out_len, s, "output length")?;
    let mut counts = vec![0usize; out_len];
    let len = out_len as isize;
    for (weights, anchor) in kernel.branches() {
        for i in 0..out_len / s {
            for j in 0..weights.len() {
                let p = (s * i + j) as isize - anchor as isize;
                counts[p.rem_euclid(len) as usize] += 1;
            }
        }
    }
    let variance = variance(&counts);
    Ok(ContributionMap {
        uniform: counts.iter().all(|&c| c == counts[0]),
        counts,
        period: s,
        variance,
        stride_divides_kernel: kernel.size().is_multiple_of(s),
    })
}

/// Row-major 2D counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionMap2 {
    pub rows: usize,
    pub cols: usize,
    pub counts: Vec<usize>,
    pub period: usize,
    pub uniform: bool,
    pub variance: f64,
}

pub fn contribution_map2(
    kernel: &KernelSpec2,
    out_rows: usize,
    out_cols: usize,
) -> Result<ContributionMap2> {
    let s = kernel.stride();
    check_len(out_rows, s, "output height")?;
    check_len(out_cols, s, "output width")?;
    let mut counts = vec![0usize; out_rows * out_cols];
    let (h, w) = (out_rows as isize, out_cols as isize);
    for (size, _) in kernel.branches() {
        let anchor = (size / 2) as isize;
        for y in 0..out_rows / s {
            for x in 0..out_cols / s {
                for a in 0..size {
                    for b in 0..size {
                        let p = ((s * y + a) as isize - anchor).rem_euclid(h);
                        let q = ((s * x + b) as isize - anchor).rem_euclid(w);
                        counts[(p * w + q) as usize] += 1;
                    }
                }
            }
        }
    }
    let variance = variance(&counts);
    Ok(ContributionMap2 {
        rows: out_rows,
        cols: out_cols,
        uniform: counts.iter().all(|&c| c == counts[0]),
        counts,
        period: s,
        variance,
    })
}
