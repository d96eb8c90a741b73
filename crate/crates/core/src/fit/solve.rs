//! Minimum-norm solves of symmetric positive semi-definite systems.

use nalgebra::{DMatrix, DVector};

/// Relative pivot tolerance: pivots below `PIVOT_TOL·trace(G)` end the factorization.
pub const PIVOT_TOL: f64 = 1e-12;

/// Outcome of [`solve_psd_min_norm`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormSolution {
    pub x: DVector<f64>,
    /// Numerical rank found by the pivoted factorization.
    pub rank: usize,
}

/// Diagonally pivoted Cholesky factorization of a PSD matrix.
///
/// Returns `R` (`n×rank`) with `G ≈ R·Rᵀ`, rows already in the original order.
pub fn pivoted_cholesky(g: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "Gram matrix must be square");
    let mut a = g.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let tol = rel_tol * g.trace().abs().max(f64::MIN_POSITIVE);
    let mut rank = 0;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, a[(i, i)]))
            .fold(
                (k, f64::NEG_INFINITY),
                |best, c| if c.1 > best.1 { c } else { best },
            );
        if pivot <= tol {
            break;
        }
        if p != k {
            a.swap_rows(k, p);
            a.swap_columns(k, p);
            l.swap_rows(k, p);
            perm.swap(k, p);
        }
        let d = pivot.sqrt();
        l[(k, k)] = d;
        for i in k + 1..n {
            l[(i, k)] = a[(i, k)] / d;
        }
        for j in k + 1..n {
            let ljk = l[(j, k)];
            if ljk == 0.0 {
                continue;
            }
            for i in k + 1..n {
                a[(i, j)] -= l[(i, k)] * ljk;
            }
        }
        rank += 1;
    }
    let mut r = DMatrix::<f64>::zeros(n, rank);
    for (row, &orig) in perm.iter().enumerate() {
        for c in 0..rank {
            r[(orig, c)] = l[(row, c)];
        }
    }
    r
}

/// Minimum-norm solution of `G·x = b` for PSD `G` with `b` in its range.
///
/// With `G = R·Rᵀ` from [`pivoted_cholesky`] and `R = Q·S`, the solution is
/// `x = Q·S⁻ᵀ·S⁻¹·Qᵀ·b`, which lies in the range of `G`.
pub fn solve_psd_min_norm(g: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> MinNormSolution {
    let r = pivoted_cholesky(g, rel_tol);
    let rank = r.ncols();
    if rank == 0 {
        return MinNormSolution {
            x: DVector::zeros(g.nrows()),
            rank,
        };
    }
    let qr = r.qr();
    let q = qr.q();
    let s = qr.r();
    let qtb = q.transpose() * b;
    let y = s
        .solve_upper_triangular(&qtb)
        .expect("pivoted factor has a nonsingular triangle");
    let z = s
        .transpose()
        .solve_lower_triangular(&y)
        .expect("pivoted factor has a nonsingular triangle");
    MinNormSolution { x: q * z, rank }
}
