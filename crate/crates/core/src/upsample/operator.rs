use nalgebra::DMatrix;

use super::{
    bed_of_nails, fourier_pad_upsample, linear, nearest, transposed_conv, BoundaryMode, KernelSpec,
    UpsampleFactor,
};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::signal::Signal;

/// A single-input 1D upsampler configuration.
///
/// Pixel shuffle is not listed: it consumes several channels rather than one signal.
#[derive(Debug, Clone, PartialEq)]
pub enum Upsampler {
    BedOfNails(UpsampleFactor),
    Nearest(UpsampleFactor),
    Linear(UpsampleFactor, BoundaryMode),
    FourierPad(UpsampleFactor),
    TransposedConv(KernelSpec, BoundaryMode),
}

impl Upsampler {
    pub fn name(&self) -> &'static str {
        match self {
            Upsampler::BedOfNails(_) => "bed_of_nails",
            Upsampler::Nearest(_) => "nearest",
            Upsampler::Linear(..) => "linear",
            Upsampler::FourierPad(_) => "fourier_pad",
            Upsampler::TransposedConv(k, _) if k.parallel_small().is_some() => "lctc",
            Upsampler::TransposedConv(..) => "transposed_conv",
        }
    }

    /// Output samples per input sample.
    pub fn factor(&self) -> usize {
        match self {
            Upsampler::BedOfNails(r)
            | Upsampler::Nearest(r)
            | Upsampler::Linear(r, _)
            | Upsampler::FourierPad(r) => r.get(),
            Upsampler::TransposedConv(k, _) => k.stride(),
        }
    }

    pub fn apply(&self, x: &Signal) -> Result<Signal> {
        Ok(match self {
            Upsampler::BedOfNails(r) => bed_of_nails(x, *r),
            Upsampler::Nearest(r) => nearest(x, *r),
            Upsampler::Linear(r, b) => linear(x, *r, *b),
            Upsampler::FourierPad(r) => fourier_pad_upsample(x, *r)?,
            Upsampler::TransposedConv(k, b) => transposed_conv(x, k, *b),
        })
    }
}

/// Dense `(factor·N)×N` matrix whose column `j` is the operator applied to `e_j`.
pub fn operator_matrix(op: &Upsampler, n: usize) -> Result<DMatrix<f64>> {
    operator_matrix_with(op, n, Execution::default())
}

pub fn operator_matrix_with(op: &Upsampler, n: usize, exec: Execution) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(invalid("operator matrix needs N ≥ 1"));
    }
    let columns = exec.map_range(n, |j| {
        op.apply(&Signal::basis(n, j)?).map(Signal::into_samples)
    });
    let rows = n * op.factor();
    let mut m = DMatrix::zeros(rows, n);
    for (j, col) in columns.into_iter().enumerate() {
        let col = col?;
        m.column_mut(j).copy_from_slice(&col);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn r2() -> UpsampleFactor {
        UpsampleFactor::new(2).unwrap()
    }

    #[test]
    fn bed_of_nails_and_nearest_matrices() {
        let m = operator_matrix(&Upsampler::BedOfNails(r2()), 2).unwrap();
        assert_eq!(
            m,
            DMatrix::from_row_slice(4, 2, &[1., 0., 0., 0., 0., 1., 0., 0.])
        );
        let m = operator_matrix(&Upsampler::Nearest(r2()), 2).unwrap();
        assert_eq!(
            m,
            DMatrix::from_row_slice(4, 2, &[1., 0., 1., 0., 0., 1., 0., 1.])
        );
    }

    /// Periodic sinc with half-weighted Nyquist, evaluated from its closed form.
    fn dirichlet(n: usize, r: usize, p: i64) -> f64 {
        let m = (n * r) as f64;
        let t = PI * p as f64 / m;
        if (p as f64 / m).fract() == 0.0 {
            return 1.0;
        }
        if n % 2 == 1 {
            // Σ_{|k|<N/2} e^{2πikp/M} / N
            (n as f64 * t).sin() / (n as f64 * t.sin())
        } else {
            // Σ_{|k|<N/2} + cos(π p N / M) over the split Nyquist pair, all / N
            let inner = ((n - 1) as f64 * t).sin() / t.sin();
            (inner + (n as f64 * t).cos()) / n as f64
        }
    }

    #[test]
    fn fourier_pad_columns_are_dirichlet_kernels() {
        for n in [3usize, 4, 5, 8] {
            let m = operator_matrix(&Upsampler::FourierPad(r2()), n).unwrap();
            for j in 0..n {
                for p in 0..2 * n {
                    let want = dirichlet(n, 2, p as i64 - 2 * j as i64);
                    assert!(
                        (m[(p, j)] - want).abs() < 1e-12,
                        "n={n} j={j} p={p}: {} vs {want}",
                        m[(p, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn matrix_vector_product_matches_apply() {
        let x = Signal::new(vec![0.3, -1.0, 2.0, 0.7, 1.1]).unwrap();
        let ops = [
            Upsampler::BedOfNails(r2()),
            Upsampler::Nearest(r2()),
            Upsampler::Linear(r2(), BoundaryMode::ZeroPad),
            Upsampler::FourierPad(UpsampleFactor::new(3).unwrap()),
            Upsampler::TransposedConv(
                KernelSpec::new(vec![0.1, -0.4, 1.0, 0.6, 0.2], 2)
                    .unwrap()
                    .with_parallel_small(vec![0.5, 0.5, 0.5])
                    .unwrap(),
                BoundaryMode::Periodic,
            ),
        ];
        for op in &ops {
            let m = operator_matrix(op, x.len()).unwrap();
            let y = &m * nalgebra::DVector::from_column_slice(x.samples());
            let direct = op.apply(&x).unwrap();
            for (a, b) in y.iter().zip(direct.samples()) {
                assert!((a - b).abs() <= 1e-12, "{}", op.name());
            }
        }
    }
}
