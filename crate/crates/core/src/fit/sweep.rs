use super::{fit_closed_form_with, FitProblem};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::upsample::UpsampleFactor;

/// Closed-form Frobenius residual for each kernel size.
///
/// Sizes must be non-decreasing. Because the anchor `⌊K/2⌋` nests supports,
/// the residual never increases along the list.
pub fn residual_sweep(n: usize, r: UpsampleFactor, sizes: &[usize]) -> Result<Vec<(usize, f64)>> {
    residual_sweep_with(n, r, sizes, Execution::default())
}

pub fn residual_sweep_with(
    n: usize,
    r: UpsampleFactor,
    sizes: &[usize],
    exec: Execution,
) -> Result<Vec<(usize, f64)>> {
    if let Some(w) = sizes.windows(2).find(|w| w[1] < w[0]) {
        return Err(invalid(format!(
            "kernel sizes must be ascending, found {} after {}",
            w[1], w[0]
        )));
    }
    // entries run in parallel; each fit assembles its own system sequentially
    exec.try_map(sizes, |&k| {
        let p = FitProblem::new(n, r, k)?;
        Ok((k, fit_closed_form_with(&p, Execution::Sequential)?.residual))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_size_is_deterministic() {
        let r = UpsampleFactor::new(2).unwrap();
        let out = residual_sweep(8, r, &[1, 1]).unwrap();
        assert_eq!(out[0], out[1]);
    }

    #[test]
    fn descending_sizes_rejected() {
        let r = UpsampleFactor::new(2).unwrap();
        assert!(residual_sweep(8, r, &[3, 2]).is_err());
    }

    #[test]
    fn full_support_reaches_zero() {
        let r = UpsampleFactor::new(2).unwrap();
        let out = residual_sweep(6, r, &[12]).unwrap();
        assert_eq!(out[0].0, 12);
        assert!(out[0].1 <= 1e-8);
    }
}
