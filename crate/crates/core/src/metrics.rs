//! Rank agreement between orderings, and the evaluation bundle reported by
//! the experiments.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::objective::{two_sum_objective, WeightVector};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;
use crate::structure::{is_r_matrix, RobinsonCheck};

fn check_lengths(p: &Permutation, q: &Permutation) -> Result<()> {
    if p.len() != q.len() {
        return Err(SeriationError::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    Ok(())
}

fn oriented(p: &Permutation, q: &Permutation, orient: bool, f: fn(&[usize], &[usize]) -> f64) -> Result<f64> {
    check_lengths(p, q)?;
    let pp = p.positions();
    let raw = f(&pp, &q.positions());
    if orient {
        Ok(raw.max(f(&pp, &q.reversed().positions())))
    } else {
        Ok(raw)
    }
}

fn tau_of_positions(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let mut score: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = (a[i] < a[j]) == (b[i] < b[j]);
            score += if s { 1 } else { -1 };
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

fn rho_of_positions(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let d2: f64 = a.iter().zip(b).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum();
    let nf = n as f64;
    1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0))
}

/// Kendall's τ between the item positions of two orderings. With `orient`,
/// the better of `q` and its reversal counts.
///
/// ```
/// use seriation::metrics::kendall_tau;
/// use seriation::permutation::Permutation;
///
/// let p = Permutation::from_one_based(&[1, 2, 3, 4]).unwrap();
/// let q = Permutation::from_one_based(&[1, 3, 2, 4]).unwrap();
/// assert!((kendall_tau(&p, &q, false).unwrap() - 2.0 / 3.0).abs() < 1e-12);
/// ```
pub fn kendall_tau(p: &Permutation, q: &Permutation, orient: bool) -> Result<f64> {
    oriented(p, q, orient, tau_of_positions)
}

/// Spearman's ρ between the item positions of two orderings.
pub fn spearman_rho(p: &Permutation, q: &Permutation, orient: bool) -> Result<f64> {
    oriented(p, q, orient, rho_of_positions)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Orientation-corrected correlations with the truth, when known.
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub tau_raw: Option<f64>,
    pub rho_raw: Option<f64>,
    /// `gᵀΠᵀ L_A Π g`.
    pub objective: f64,
    /// Robinson violations of `A` reordered by the candidate.
    pub r_violations: usize,
}

/// Scores `candidate` on `a`, against `truth` if given. `y` defaults to
/// `g = (1, ..., n)`.
pub fn evaluate(
    a: &SimilarityMatrix,
    candidate: &Permutation,
    truth: Option<&Permutation>,
    y: Option<&WeightVector>,
) -> Result<Evaluation> {
    let ramp;
    let y = match y {
        Some(y) => y,
        None => {
            ramp = WeightVector::ramp(a.n());
            &ramp
        }
    };
    let objective = two_sum_objective(a, candidate, y)?;
    let r_violations = is_r_matrix(&a.reordered(candidate)?, RobinsonCheck::default()).violations;
    let (mut tau, mut rho, mut tau_raw, mut rho_raw) = (None, None, None, None);
    if let Some(t) = truth {
        tau = Some(kendall_tau(t, candidate, true)?);
        rho = Some(spearman_rho(t, candidate, true)?);
        tau_raw = Some(kendall_tau(t, candidate, false)?);
        rho_raw = Some(spearman_rho(t, candidate, false)?);
    }
    Ok(Evaluation { tau, rho, tau_raw, rho_raw, objective, r_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn identical_and_reversed() {
        let p = perm(&[3, 1, 4, 2, 5]);
        assert_eq!(kendall_tau(&p, &p, false).unwrap(), 1.0);
        assert_eq!(spearman_rho(&p, &p, false).unwrap(), 1.0);
        assert_eq!(kendall_tau(&p, &p.reversed(), false).unwrap(), -1.0);
        assert_eq!(spearman_rho(&p, &p.reversed(), false).unwrap(), -1.0);
        assert_eq!(kendall_tau(&p, &p.reversed(), true).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_values() {
        let id = Permutation::identity(3);
        assert!((spearman_rho(&id, &perm(&[1, 3, 2]), false).unwrap() - 0.5).abs() < 1e-12);
        assert!(kendall_tau(&id, &Permutation::identity(4), false).is_err());
    }

    #[test]
    fn symmetric_and_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = Permutation::random(9, &mut rng);
            let q = Permutation::random(9, &mut rng);
            let r = Permutation::random(9, &mut rng);
            let t = kendall_tau(&p, &q, false).unwrap();
            assert_eq!(t, kendall_tau(&q, &p, false).unwrap());
            let relabeled = kendall_tau(&r.then(&p).unwrap(), &r.then(&q).unwrap(), false).unwrap();
            assert!((t - relabeled).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_truth_on_robinson() {
        let m = DMatrix::from_fn(6, 6, |i, j| 6.0 - i.abs_diff(j) as f64);
        let truth = perm(&[4, 1, 6, 2, 5, 3]);
        let a = SimilarityMatrix::new(truth.inverse().reorder_symmetric(&m)).unwrap();
        let e = evaluate(&a, &truth, Some(&truth), None).unwrap();
        assert_eq!(e.tau, Some(1.0));
        assert_eq!(e.rho, Some(1.0));
        assert_eq!(e.r_violations, 0);
        let no_truth = evaluate(&a, &truth, None, None).unwrap();
        assert!(no_truth.tau.is_none());
    }
}
