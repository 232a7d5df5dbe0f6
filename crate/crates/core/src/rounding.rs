//! From doubly stochastic matrices back to permutations: randomized
//! rounding through monotone vectors, and Sinkhorn scaling.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SeriationError};
use crate::objective::{two_sum_objective, WeightVector};
use crate::permutation::Permutation;
use crate::relax::DoublyStochasticMatrix;
use crate::similarity::SimilarityMatrix;

/// Default number of rounding draws.
pub const DEFAULT_DRAWS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Rounding {
    pub best: Permutation,
    /// 2-SUM objective of `best` with `g = (1, ..., n)`.
    pub objective: f64,
    /// Draw that produced `best` (the first one, among equal objectives).
    pub best_draw: usize,
    /// Objective of every draw.
    pub trace: Vec<f64>,
}

/// Draws `k` sorted uniform vectors `v`, orders the items by `S v` (stable,
/// ties by index) and keeps the order with the lowest objective
/// `gᵀΠᵀ L_A Π g`.
///
/// All draws come from one seeded stream, so the first `k` draws do not
/// depend on how many more follow and the best objective can only improve
/// as `k` grows. Scoring the reversal of each draw as well would change
/// nothing, since the objective is invariant under reversal for `g`.
///
/// ```
/// use seriation::permutation::Permutation;
/// use seriation::relax::DoublyStochasticMatrix;
/// use seriation::rounding::sample_permutations;
/// use seriation::SimilarityMatrix;
///
/// let perm = Permutation::from_one_based(&[2, 3, 1]).unwrap();
/// let s = DoublyStochasticMatrix::new(perm.matrix(), 0.0).unwrap();
/// let a = SimilarityMatrix::zeros(3);
/// assert_eq!(sample_permutations(&s, &a, 10, 1).unwrap().best, perm);
/// ```
pub fn sample_permutations(s: &DoublyStochasticMatrix, a: &SimilarityMatrix, k: usize, seed: u64) -> Result<Rounding> {
    sample_from_matrix(s.entries(), a, k, seed)
}

/// [`sample_permutations`] without the doubly stochastic check, for
/// iterates that are only approximately feasible.
pub fn sample_from_matrix(s: &DMatrix<f64>, a: &SimilarityMatrix, k: usize, seed: u64) -> Result<Rounding> {
    let n = a.n();
    if s.nrows() != n || s.ncols() != n {
        return Err(SeriationError::DimensionMismatch { expected: n, got: s.nrows() });
    }
    if k == 0 {
        return Err(SeriationError::InvalidParameter("at least one draw is needed".into()));
    }
    let g = WeightVector::ramp(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![0.0; n];
    let mut best: Option<(Permutation, f64, usize)> = None;
    let mut trace = Vec::with_capacity(k);
    for draw in 0..k {
        loop {
            for x in v.iter_mut() {
                *x = rng.random::<f64>();
            }
            v.sort_by(f64::total_cmp);
            if v.windows(2).all(|w| w[0] < w[1]) {
                break;
            }
        }
        let sv = s * DVector::from_column_slice(&v);
        let perm = Permutation::argsort(sv.as_slice());
        let f = two_sum_objective(a, &perm, &g)?;
        trace.push(f);
        if best.as_ref().is_none_or(|b| f < b.1) {
            best = Some((perm, f, draw));
        }
    }
    let (best, objective, best_draw) = best.expect("k >= 1");
    Ok(Rounding { best, objective, best_draw, trace })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sinkhorn {
    pub matrix: DoublyStochasticMatrix,
    /// Full sweeps (row then column scaling) performed.
    pub sweeps: usize,
    /// Largest row-sum deviation after the last sweep (columns are exact).
    pub deviation: f64,
    /// `‖Π‖_F` at the start and after every half-step.
    pub norm_trace: Vec<f64>,
}

/// Alternately scales row sums and column sums to one until every row sum
/// is within `tol` of one.
///
/// Strictly positive input always converges. Nonnegative input converges
/// only if its zero pattern has total support; zeros trigger a warning and
/// a failure to converge within `max_sweeps` is reported as
/// [`SeriationError::NoConvergence`].
pub fn sinkhorn(m: &DMatrix<f64>, max_sweeps: usize, tol: f64) -> Result<Sinkhorn> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(SeriationError::NotSquare { rows, cols });
    }
    if let Some(idx) = m.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SeriationError::InvalidEntry { row: idx % rows, col: idx / rows });
    }
    if m.iter().any(|&v| v == 0.0) {
        log::warn!("Sinkhorn input has zero entries; convergence needs total support");
    }
    let mut p = m.clone();
    let mut norm_trace = vec![p.norm()];
    let mut deviation = row_deviation(&p);
    let mut sweeps = 0;
    while deviation > tol {
        if sweeps == max_sweeps {
            return Err(SeriationError::NoConvergence { iterations: sweeps, deviation });
        }
        for mut row in p.row_iter_mut() {
            let sum = row.sum();
            if sum == 0.0 {
                return Err(SeriationError::NoConvergence { iterations: sweeps, deviation: f64::INFINITY });
            }
            row /= sum;
        }
        norm_trace.push(p.norm());
        for mut col in p.column_iter_mut() {
            let sum = col.sum();
            if sum == 0.0 {
                return Err(SeriationError::NoConvergence { iterations: sweeps, deviation: f64::INFINITY });
            }
            col /= sum;
        }
        norm_trace.push(p.norm());
        sweeps += 1;
        deviation = row_deviation(&p).max(col_deviation(&p));
    }
    Ok(Sinkhorn { matrix: DoublyStochasticMatrix::new_unchecked(p), sweeps, deviation, norm_trace })
}

fn row_deviation(p: &DMatrix<f64>) -> f64 {
    p.row_iter().map(|r| (r.sum() - 1.0).abs()).fold(0.0, f64::max)
}

fn col_deviation(p: &DMatrix<f64>) -> f64 {
    p.column_iter().map(|c| (c.sum() - 1.0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::stochastic_deviation;

    #[test]
    fn constant_matrix_scales_to_barycenter() {
        let out = sinkhorn(&DMatrix::from_element(4, 4, 7.0), 100, 1e-12).unwrap();
        assert!((out.matrix.entries() - DMatrix::from_element(4, 4, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn positive_diagonal_scales_to_identity() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5, 9.0]));
        let out = sinkhorn(&d, 100, 1e-12).unwrap();
        assert_eq!(out.matrix.entries(), &DMatrix::<f64>::identity(3, 3));
    }

    #[test]
    fn two_by_two_fixed_point() {
        // a limit [[a, 1 − a], [1 − a, a]] keeps the cross ratio: a²/(1 − a)² = (1·4)/(2·3)
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let out = sinkhorn(&m, 10_000, 1e-12).unwrap();
        let r = (2.0f64 / 3.0).sqrt();
        let a = r / (1.0 + r);
        assert!((out.matrix.entries()[(0, 0)] - a).abs() < 1e-10);
        assert!(stochastic_deviation(out.matrix.entries()).unwrap() < 1e-10);
    }

    #[test]
    fn missing_support_fails() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(sinkhorn(&m, 50, 1e-10), Err(SeriationError::NoConvergence { .. })));
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(sinkhorn(&m, 200, 1e-10), Err(SeriationError::NoConvergence { .. })));
    }

    #[test]
    fn barycenter_rounds_to_identity() {
        let a = SimilarityMatrix::new(DMatrix::from_element(5, 5, 1.0)).unwrap();
        let r = sample_permutations(&DoublyStochasticMatrix::uniform(5), &a, 5, 0).unwrap();
        assert!(r.best.is_identity());
    }

    #[test]
    fn more_draws_never_hurt() {
        let a = SimilarityMatrix::new(DMatrix::from_fn(6, 6, |i, j| ((i * j) % 4) as f64)).unwrap();
        let s = DoublyStochasticMatrix::uniform(6).into_entries() * 0.5
            + Permutation::from_one_based(&[3, 1, 2, 6, 5, 4]).unwrap().matrix() * 0.5;
        let short = sample_from_matrix(&s, &a, 10, 4).unwrap();
        let long = sample_from_matrix(&s, &a, 40, 4).unwrap();
        assert_eq!(short.trace[..], long.trace[..10]);
        assert!(long.objective <= short.objective);
        assert!(sample_from_matrix(&s, &a, 0, 4).is_err());
    }
}
