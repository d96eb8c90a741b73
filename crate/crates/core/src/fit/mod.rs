//! Least-squares fitting of transposed-convolution kernels to the ideal
//! Fourier-padding upsampler.
//!
//! A periodic transposed convolution is linear in its weights,
//! `T(w) = Σ_j w_j·B_j`, so matching it to the ideal operator `U*` is a
//! linear least-squares problem. Two objectives are supported: the Frobenius
//! distance between operators, and the summed squared error over a corpus of
//! input signals. Both are solved exactly through the normal equations or
//! iteratively by gradient descent.

mod basis;
mod gd;
mod profile;
mod solve;
mod sweep;

pub use basis::{build_basis, build_basis_with};
pub use gd::{fit_gradient_descent, GdOptions, DIVERGENCE_PATIENCE};
pub use profile::{kernel_edge_profile, off_center_sign_changes, EdgeProfile};
pub use solve::{pivoted_cholesky, solve_psd_min_norm, MinNormSolution, PIVOT_TOL};
pub use sweep::{residual_sweep, residual_sweep_with};

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::signal::Signal;
use crate::upsample::{
    fourier_pad_upsample, operator_matrix_with, transposed_conv, BoundaryMode, KernelSpec,
    UpsampleFactor, Upsampler,
};
use basis::one_hot;

/// Size of the parallel branch used by the LCTC fit.
pub const LCTC_SMALL_SIZE: usize = 3;

/// What the fitted operator is compared against.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Objective {
    /// `‖T(w) − U*‖_F²`.
    #[default]
    OperatorFrobenius,
    /// `Σ_x ‖T(w)·x − U*·x‖²` over the listed signals.
    CorpusLsq(Vec<Signal>),
}

/// One kernel-fitting problem. The stride equals the upsampling factor and the
/// boundary is periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    n: usize,
    factor: UpsampleFactor,
    kernel_size: usize,
    objective: Objective,
    parallel_small: Option<usize>,
}

impl FitProblem {
    pub fn new(n: usize, factor: UpsampleFactor, kernel_size: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("fit problem needs N ≥ 1"));
        }
        if kernel_size == 0 {
            return Err(invalid("kernel size must be at least 1"));
        }
        Ok(Self {
            n,
            factor,
            kernel_size,
            objective: Objective::OperatorFrobenius,
            parallel_small: None,
        })
    }

    /// Switches to the corpus objective. Every signal must have length `N`.
    pub fn with_corpus(mut self, corpus: Vec<Signal>) -> Result<Self> {
        if corpus.is_empty() {
            return Err(invalid("corpus objective needs at least one signal"));
        }
        if let Some(bad) = corpus.iter().find(|x| x.len() != self.n) {
            return Err(invalid(format!(
                "corpus signal has length {}, expected {}",
                bad.len(),
                self.n
            )));
        }
        self.objective = Objective::CorpusLsq(corpus);
        Ok(self)
    }

    /// Adds a parallel branch of `size` taps fitted jointly with the main kernel.
    pub fn with_parallel_small(mut self, size: usize) -> Result<Self> {
        if size == 0 || size > self.kernel_size {
            return Err(invalid(format!(
                "parallel branch size {size} must be in 1..={}",
                self.kernel_size
            )));
        }
        self.parallel_small = Some(size);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> UpsampleFactor {
        self.factor
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel_size
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn parallel_small(&self) -> Option<usize> {
        self.parallel_small
    }

    fn parameter_count(&self) -> usize {
        self.kernel_size + self.parallel_small.unwrap_or(0)
    }

    /// Splits a parameter vector into the main kernel and the optional branch.
    pub fn kernel_from(&self, params: &[f64]) -> Result<KernelSpec> {
        if params.len() != self.parameter_count() {
            return Err(invalid(format!(
                "expected {} parameters, got {}",
                self.parameter_count(),
                params.len()
            )));
        }
        let (main, small) = params.split_at(self.kernel_size);
        let k = KernelSpec::new(main.to_vec(), self.factor.get())?;
        match self.parallel_small {
            Some(_) => k.with_parallel_small(small.to_vec()),
            None => Ok(k),
        }
    }

    /// One-hot kernels of every parameter, main taps first.
    fn unit_kernels(&self) -> Result<Vec<KernelSpec>> {
        let s = self.factor.get();
        let mut out = Vec::with_capacity(self.parameter_count());
        for j in 0..self.kernel_size {
            out.push(one_hot(self.kernel_size, j, s)?);
        }
        if let Some(size) = self.parallel_small {
            for j in 0..size {
                out.push(one_hot(size, j, s)?);
            }
        }
        Ok(out)
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub kernel: KernelSpec,
    /// Frobenius distance to the ideal operator, or root-mean corpus error.
    pub residual: f64,
    /// 0 for the closed form.
    pub iterations: usize,
    pub objective_history: Option<Vec<f64>>,
    /// Numerical rank of the Gram matrix.
    pub rank: usize,
    pub rank_deficient: bool,
}

/// The flattened least-squares system `min ‖A·w − t‖²` behind a [`FitProblem`].
///
/// Column `j` of `A` is the vectorized `B_j` (or the stacked `B_j·x` over the
/// corpus); `t` is the matching vectorization of the ideal operator.
#[derive(Debug, Clone)]
pub struct FitSystem {
    design: DMatrix<f64>,
    target: DVector<f64>,
    gram: DMatrix<f64>,
    rhs: DVector<f64>,
    target_energy: f64,
    residual_scale: f64,
}

impl FitSystem {
    pub fn build(problem: &FitProblem) -> Result<Self> {
        Self::build_with(problem, Execution::default())
    }

    pub fn build_with(problem: &FitProblem, exec: Execution) -> Result<Self> {
        let n = problem.n;
        let units = problem.unit_kernels()?;
        let (columns, target, residual_scale) = match &problem.objective {
            Objective::OperatorFrobenius => {
                let columns = exec.try_map(&units, |k| {
                    let op = Upsampler::TransposedConv(k.clone(), BoundaryMode::Periodic);
                    operator_matrix_with(&op, n, Execution::Sequential)
                        .map(|m| m.as_slice().to_vec())
                })?;
                let ideal = operator_matrix_with(&Upsampler::FourierPad(problem.factor), n, exec)?;
                (columns, ideal.as_slice().to_vec(), 1.0)
            }
            Objective::CorpusLsq(corpus) => {
                let columns = exec.map(&units, |k| {
                    corpus
                        .iter()
                        .flat_map(|x| transposed_conv(x, k, BoundaryMode::Periodic).into_samples())
                        .collect::<Vec<f64>>()
                });
                let mut target = Vec::new();
                for x in corpus {
                    target.extend(fourier_pad_upsample(x, problem.factor)?.into_samples());
                }
                (columns, target, 1.0 / corpus.len() as f64)
            }
        };
        let rows = target.len();
        let design = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
        let target = DVector::from_vec(target);
        let p = design.ncols();
        let gram_cols = exec.map_range(p, |j| {
            let cj = design.column(j);
            (0..p)
                .map(|l| cj.dot(&design.column(l)))
                .collect::<Vec<f64>>()
        });
        let gram = DMatrix::from_fn(p, p, |i, j| gram_cols[j][i]);
        let rhs = DVector::from_iterator(p, (0..p).map(|j| design.column(j).dot(&target)));
        let target_energy = target.norm_squared();
        Ok(Self {
            design,
            target,
            gram,
            rhs,
            target_energy,
            residual_scale,
        })
    }

    /// `G_{jl} = ⟨B_j, B_l⟩`.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `b_j = ⟨B_j, U*⟩`.
    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    /// `‖U*‖²`, the objective at `w = 0`.
    pub fn target_energy(&self) -> f64 {
        self.target_energy
    }

    pub fn parameter_count(&self) -> usize {
        self.design.ncols()
    }

    /// Objective evaluated directly from the operator difference.
    pub fn objective(&self, w: &[f64]) -> f64 {
        (&self.design * DVector::from_column_slice(w) - &self.target).norm_squared()
    }

    /// The same objective via `wᵀGw − 2bᵀw + ‖U*‖²`; cheap but subject to cancellation.
    pub fn quadratic_objective(&self, w: &DVector<f64>) -> f64 {
        (w.dot(&(&self.gram * w)) - 2.0 * self.rhs.dot(w) + self.target_energy).max(0.0)
    }

    /// `∇_j = 2⟨T(w) − U*, B_j⟩`, computed from the explicit difference.
    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let diff = &self.design * DVector::from_column_slice(w) - &self.target;
        (self.design.transpose() * diff * 2.0).as_slice().to_vec()
    }

    /// Frobenius norm of the difference, or the root-mean corpus error.
    pub fn residual(&self, w: &[f64]) -> f64 {
        (self.objective(w) * self.residual_scale).sqrt()
    }
}

/// Exact least-squares fit through the normal equations.
///
/// Rank-deficient Gram matrices (duplicated taps from a parallel branch, or
/// kernels longer than `r·N`) yield the minimum-norm solution.
pub fn fit_closed_form(problem: &FitProblem) -> Result<FitResult> {
    fit_closed_form_with(problem, Execution::default())
}

pub fn fit_closed_form_with(problem: &FitProblem, exec: Execution) -> Result<FitResult> {
    let system = FitSystem::build_with(problem, exec)?;
    let sol = solve_psd_min_norm(system.gram(), system.rhs(), PIVOT_TOL);
    let params = sol.x.as_slice();
    Ok(FitResult {
        kernel: problem.kernel_from(params)?,
        residual: system.residual(params),
        iterations: 0,
        objective_history: None,
        rank: sol.rank,
        rank_deficient: sol.rank < system.parameter_count(),
    })
}

/// Joint fit of a large kernel and a parallel small branch (3 taps unless the
/// problem already names a size).
pub fn lctc_fit(problem: &FitProblem) -> Result<FitResult> {
    if problem.kernel_size < 5 {
        return Err(invalid(format!(
            "LCTC fit needs a kernel of at least 5 taps, got {}",
            problem.kernel_size
        )));
    }
    let p = match problem.parallel_small {
        Some(_) => problem.clone(),
        None => problem.clone().with_parallel_small(LCTC_SMALL_SIZE)?,
    };
    fit_closed_form(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: usize) -> UpsampleFactor {
        UpsampleFactor::new(v).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(FitProblem::new(0, r(2), 3).is_err());
        assert!(FitProblem::new(4, r(2), 0).is_err());
        let p = FitProblem::new(4, r(2), 3).unwrap();
        assert!(p.clone().with_corpus(vec![]).is_err());
        assert!(p
            .clone()
            .with_corpus(vec![Signal::constant(3, 1.0).unwrap()])
            .is_err());
        assert!(p.clone().with_parallel_small(4).is_err());
        assert!(lctc_fit(&p).is_err());
    }

    #[test]
    fn full_support_is_exact() {
        let res = fit_closed_form(&FitProblem::new(4, r(2), 8).unwrap()).unwrap();
        assert!(res.residual <= 1e-8, "{}", res.residual);
        assert!(!res.rank_deficient);
    }

    #[test]
    fn single_tap_fit_is_scalar_projection() {
        for n in 2..7 {
            let p = FitProblem::new(n, r(2), 1).unwrap();
            let res = fit_closed_form(&p).unwrap();
            // w = ⟨B0,U*⟩/⟨B0,B0⟩ where B0 picks the diagonal U*[2i, i] = 1
            assert!((res.kernel.weights()[0] - 1.0).abs() < 1e-12);
            assert!(res.residual > 0.0);
        }
    }

    #[test]
    fn gradient_vanishes_at_the_solution() {
        let p = FitProblem::new(6, r(2), 5).unwrap();
        let sys = FitSystem::build(&p).unwrap();
        let res = fit_closed_form(&p).unwrap();
        let g = sys.gradient(res.kernel.weights());
        assert!(g.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn lctc_keeps_parallel_branch() {
        let p = FitProblem::new(8, r(2), 7).unwrap();
        let res = lctc_fit(&p).unwrap();
        assert_eq!(res.kernel.parallel_small().map(<[f64]>::len), Some(3));
        assert!(res.rank_deficient);
        assert_eq!(res.rank, 7);
    }
}
