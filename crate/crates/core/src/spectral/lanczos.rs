//! Lanczos iteration for the top eigenpair of `sI − L` restricted to the
//! complement of the ones vector. That pair is `(s − λ₂, v₂)`.

use nalgebra::{DMatrix, DVector};

use super::dense::MULTIPLICITY_TOL;
use super::{FiedlerMethod, FiedlerResult};
use crate::error::{Result, SeriationError};
use crate::linalg::symmetric_eigen;

const POWER_STEPS: usize = 30;

/// Deterministic, non-degenerate start vector.
fn start_vector(n: usize) -> DVector<f64> {
    DVector::from_fn(n, |i, _| ((i + 1) as f64 * 0.754_877_666_246_692_7).fract() - 0.5)
}

/// Rough `λ_max(L)` from a few power steps.
fn power_estimate(l: &DMatrix<f64>) -> f64 {
    let mut x = start_vector(l.nrows());
    x.normalize_mut();
    let mut estimate = 0.0;
    for _ in 0..POWER_STEPS {
        let y = l * &x;
        estimate = x.dot(&y);
        let norm = y.norm();
        if norm == 0.0 {
            break;
        }
        x = y / norm;
    }
    estimate
}

fn project_out(w: &mut DVector<f64>, basis: &[DVector<f64>], ones: &DVector<f64>) {
    // twice is enough (Kahan)
    for _ in 0..2 {
        let c = ones.dot(w);
        w.axpy(-c, ones, 1.0);
        for q in basis {
            let c = q.dot(w);
            w.axpy(-c, q, 1.0);
        }
    }
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let k = alpha.len();
    DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    })
}

pub(super) fn fiedler(l: &DMatrix<f64>, tolerance: f64, max_iterations: usize) -> Result<FiedlerResult> {
    let n = l.nrows();
    let shift = power_estimate(l);
    let scale = shift.abs().max(1.0);
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let cap = max_iterations.min(n - 1).max(1);

    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut v = start_vector(n);
    project_out(&mut v, &basis, &ones);
    v.normalize_mut();

    loop {
        let mut w = &v * shift - l * &v;
        alpha.push(v.dot(&w));
        basis.push(v);
        project_out(&mut w, &basis, &ones);
        let b = w.norm();
        let k = basis.len();
        let exhausted = b <= 1e-12 * scale || k == n - 1;
        if exhausted || k == cap || k % (k / 10).max(8) == 0 {
            let (thetas, s) = symmetric_eigen(&tridiagonal(&alpha, &beta))?;
            let top = s.column(k - 1);
            let residual = b * top[k - 1].abs();
            let converged = exhausted || residual <= tolerance * scale;
            if converged || k == cap {
                if !converged {
                    return Err(SeriationError::ConvergenceFailure { iterations: k, residual });
                }
                let mut vector = DVector::zeros(n);
                for (q, &c) in basis.iter().zip(top.iter()) {
                    vector.axpy(c, q, 1.0);
                }
                let multiplicity_warning = k >= 2 && thetas[k - 1] - thetas[k - 2] <= MULTIPLICITY_TOL * scale;
                return Ok(FiedlerResult {
                    value: shift - thetas[k - 1],
                    vector,
                    multiplicity_warning,
                    method: FiedlerMethod::Iterative,
                    iterations: k,
                });
            }
        }
        beta.push(b);
        v = w / b;
    }
}
