use nalgebra::DMatrix;

use crate::error::Result;
use crate::exec::Execution;
use crate::upsample::{operator_matrix_with, BoundaryMode, KernelSpec, UpsampleFactor, Upsampler};

/// One-hot kernel of `size` taps with the unit at `tap`.
pub(crate) fn one_hot(size: usize, tap: usize, stride: usize) -> Result<KernelSpec> {
    let mut w = vec![0.0; size];
    w[tap] = 1.0;
    KernelSpec::new(w, stride)
}

/// Operator matrices `B_j` of the periodic transposed convolution with one-hot
/// kernel `e_j`, so that `T(w) = Σ_j w_j·B_j`.
pub fn build_basis(n: usize, r: UpsampleFactor, kernel_size: usize) -> Result<Vec<DMatrix<f64>>> {
    build_basis_with(n, r, kernel_size, Execution::default())
}

pub fn build_basis_with(
    n: usize,
    r: UpsampleFactor,
    kernel_size: usize,
    exec: Execution,
) -> Result<Vec<DMatrix<f64>>> {
    exec.map_range(kernel_size, |j| {
        let k = one_hot(kernel_size, j, r.get())?;
        operator_matrix_with(
            &Upsampler::TransposedConv(k, BoundaryMode::Periodic),
            n,
            Execution::Sequential,
        )
    })
    .into_iter()
    .collect()
}
