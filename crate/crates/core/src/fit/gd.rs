use nalgebra::{DMatrix, DVector};

use super::{FitProblem, FitResult, FitSystem};
use crate::error::{invalid, Error, Result};

/// Consecutive objective increases tolerated before reporting divergence.
pub const DIVERGENCE_PATIENCE: usize = 10;

const POWER_ITERATIONS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct GdOptions {
    /// Step size; `None` picks `1/(2·λ_max(G))`.
    pub lr: Option<f64>,
    pub max_iter: usize,
    /// Stop once the relative objective change falls below this.
    pub tol: f64,
    /// Starting weights; zeros when absent.
    pub init: Option<Vec<f64>>,
}

impl Default for GdOptions {
    fn default() -> Self {
        Self {
            lr: None,
            max_iter: 100_000,
            tol: 1e-12,
            init: None,
        }
    }
}

/// Largest eigenvalue of a PSD matrix by power iteration from the all-ones vector.
fn largest_eigenvalue(g: &DMatrix<f64>) -> f64 {
    let mut v = DVector::from_element(g.nrows(), 1.0 / (g.nrows() as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = g * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = v.dot(&w);
        v = w / norm;
    }
    lambda.max((g * &v).norm())
}

/// Minimizes the fit objective by fixed-step gradient descent.
///
/// Fails with [`Error::Divergence`] when the objective rises for
/// [`DIVERGENCE_PATIENCE`] consecutive steps.
pub fn fit_gradient_descent(problem: &FitProblem, opts: &GdOptions) -> Result<FitResult> {
    let system = FitSystem::build(problem)?;
    let p = system.parameter_count();
    let lr = match opts.lr {
        Some(lr) if lr > 0.0 && lr.is_finite() => lr,
        Some(lr) => return Err(invalid(format!("learning rate must be positive, got {lr}"))),
        None => {
            let lambda = largest_eigenvalue(system.gram());
            if lambda <= 0.0 {
                return Err(Error::Numerical("Gram matrix is zero".into()));
            }
            1.0 / (2.0 * lambda)
        }
    };
    let mut w = match &opts.init {
        Some(init) if init.len() == p => DVector::from_column_slice(init),
        Some(init) => {
            return Err(invalid(format!(
                "initial kernel has {} weights, expected {p}",
                init.len()
            )))
        }
        None => DVector::zeros(p),
    };
    let gram = system.gram();
    let rhs = system.rhs();
    // quadratic-form evaluations carry round-off of this size
    let noise = 64.0 * f64::EPSILON * system.target_energy().max(f64::MIN_POSITIVE);

    let mut f_prev = system.quadratic_objective(&w);
    let mut history = vec![f_prev];
    let mut rising = 0;
    let mut iterations = 0;
    for it in 1..=opts.max_iter {
        let grad = (gram * &w - rhs) * 2.0;
        w -= grad * lr;
        let f = system.quadratic_objective(&w);
        if !f.is_finite() {
            return Err(Error::Divergence { lr, iterations: it });
        }
        history.push(f);
        iterations = it;
        if f > f_prev + noise {
            rising += 1;
            if rising >= DIVERGENCE_PATIENCE {
                return Err(Error::Divergence { lr, iterations: it });
            }
        } else {
            rising = 0;
        }
        let change = (f_prev - f).abs();
        if rising == 0 && (change <= opts.tol * f_prev.abs() || change <= noise) {
            break;
        }
        f_prev = f;
    }
    let params = w.as_slice();
    Ok(FitResult {
        kernel: problem.kernel_from(params)?,
        residual: system.residual(params),
        iterations,
        objective_history: Some(history),
        rank: p,
        rank_deficient: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_closed_form;
    use crate::upsample::UpsampleFactor;

    fn r2() -> UpsampleFactor {
        UpsampleFactor::new(2).unwrap()
    }

    #[test]
    fn starts_at_optimum_and_stops() {
        let p = FitProblem::new(8, r2(), 5).unwrap();
        let exact = fit_closed_form(&p).unwrap();
        let opts = GdOptions {
            init: Some(exact.kernel.weights().to_vec()),
            ..GdOptions::default()
        };
        let res = fit_gradient_descent(&p, &opts).unwrap();
        assert!(res.iterations <= 1);
        assert!((res.residual - exact.residual).abs() < 1e-9);
    }

    #[test]
    fn small_step_converges_to_closed_form() {
        let p = FitProblem::new(8, r2(), 3).unwrap();
        let exact = fit_closed_form(&p).unwrap();
        let opts = GdOptions {
            lr: Some(0.005),
            ..GdOptions::default()
        };
        let res = fit_gradient_descent(&p, &opts).unwrap();
        assert!((res.residual - exact.residual).abs() <= 1e-6);
        assert!(res.iterations > 1);
    }

    #[test]
    fn oversized_step_diverges() {
        let p = FitProblem::new(8, r2(), 3).unwrap();
        let opts = GdOptions {
            lr: Some(1.0),
            ..GdOptions::default()
        };
        match fit_gradient_descent(&p, &opts) {
            Err(Error::Divergence { lr, iterations }) => {
                assert_eq!(lr, 1.0);
                assert_eq!(iterations, DIVERGENCE_PATIENCE);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_options() {
        let p = FitProblem::new(4, r2(), 3).unwrap();
        let bad_lr = GdOptions {
            lr: Some(-1.0),
            ..GdOptions::default()
        };
        assert!(fit_gradient_descent(&p, &bad_lr).is_err());
        let bad_init = GdOptions {
            init: Some(vec![0.0; 2]),
            ..GdOptions::default()
        };
        assert!(fit_gradient_descent(&p, &bad_init).is_err());
    }

    #[test]
    fn power_iteration_finds_top_eigenvalue() {
        let g = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 3.0]);
        assert!((largest_eigenvalue(&g) - 4.0).abs() < 1e-9);
    }
}
