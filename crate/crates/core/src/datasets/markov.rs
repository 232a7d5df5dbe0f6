//! Gaussian Markov chains `X₁ ~ N(0, σ₁²)`, `X_{i+1} = bᵢ Xᵢ + εᵢ` with
//! `εᵢ ~ N(0, σ²_{i+1})`, observed in a random order.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

/// Default chain coefficient. With unit noise, 60 samples put the spectral
/// ordering well outside its perturbative regime while 6000 samples
/// usually recover the chain exactly.
pub const DEFAULT_COEFFICIENT: f64 = 0.67;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovChainSpec {
    pub n: usize,
    /// `b₁, ..., b_{n-1}`.
    pub coefficients: Vec<f64>,
    /// `σ₁, ..., σ_n`, all positive.
    pub noise: Vec<f64>,
    /// Number of observed samples; 0 means the exact model covariance.
    pub samples: usize,
    pub seed: u64,
}

impl MarkovChainSpec {
    /// Chain with the default coefficient and unit noise.
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        Self { n, coefficients: vec![DEFAULT_COEFFICIENT; n.saturating_sub(1)], noise: vec![1.0; n], samples, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SeriationError::InvalidParameter("Markov chain needs at least one variable".into()));
        }
        if self.coefficients.len() + 1 != self.n {
            return Err(SeriationError::DimensionMismatch { expected: self.n - 1, got: self.coefficients.len() });
        }
        if self.noise.len() != self.n {
            return Err(SeriationError::DimensionMismatch { expected: self.n, got: self.noise.len() });
        }
        if let Some(s) = self.noise.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(SeriationError::InvalidParameter(format!("noise level {s} must be positive")));
        }
        if self.coefficients.iter().any(|b| !b.is_finite()) {
            return Err(SeriationError::InvalidParameter("non-finite chain coefficient".into()));
        }
        if self.samples == 1 {
            return Err(SeriationError::InvalidParameter("at least two samples are needed".into()));
        }
        Ok(())
    }

    /// Model covariance of `(X₁, ..., X_n)` in chain order.
    pub fn exact_covariance(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        let n = self.n;
        let mut var = vec![self.noise[0] * self.noise[0]; n];
        for i in 1..n {
            let b = self.coefficients[i - 1];
            var[i] = b * b * var[i - 1] + self.noise[i] * self.noise[i];
        }
        let mut c = DMatrix::zeros(n, n);
        for i in 0..n {
            c[(i, i)] = var[i];
            let mut factor = 1.0;
            for j in (i + 1)..n {
                factor *= self.coefficients[j - 1];
                c[(i, j)] = factor * var[i];
                c[(j, i)] = factor * var[i];
            }
        }
        Ok(c)
    }

    /// Draws `samples` realizations (rows) of the chain.
    pub fn draw(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut x = DMatrix::zeros(self.samples, self.n);
        for s in 0..self.samples {
            let mut prev: f64 = 0.0;
            for i in 0..self.n {
                let eps: f64 = StandardNormal.sample(&mut rng);
                let b = if i == 0 { 0.0 } else { self.coefficients[i - 1] };
                prev = b * prev + self.noise[i] * eps;
                x[(s, i)] = prev;
            }
        }
        Ok(x)
    }

    /// Exact covariance when `samples == 0`, sample covariance otherwise.
    pub fn covariance(&self) -> Result<DMatrix<f64>> {
        if self.samples == 0 {
            return self.exact_covariance();
        }
        Ok(sample_covariance(&self.draw()?))
    }
}

/// Unbiased covariance of the columns of `x`.
pub fn sample_covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let m = x.nrows();
    let mut centered = x.clone();
    for mut col in centered.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    centered.transpose() * &centered / (m.max(2) - 1) as f64
}

/// `|corr(Xᵢ, Xⱼ)|` from a covariance matrix.
pub fn abs_correlation(c: &DMatrix<f64>) -> DMatrix<f64> {
    let d: Vec<f64> = c.diagonal().iter().map(|v| v.max(f64::MIN_POSITIVE).sqrt()).collect();
    DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| (c[(i, j)] / (d[i] * d[j])).abs())
}

/// Similarity `|corr|` of the chain variables, relabeled by a random
/// permutation drawn from `permute_seed`. The returned truth orders the
/// relabeled items along the chain: `a.reordered(&truth)` is the matrix in
/// chain order.
///
/// ```
/// use seriation::datasets::{markov_similarity, MarkovChainSpec};
/// use seriation::metrics::kendall_tau;
/// use seriation::spectral_order;
///
/// let (a, truth) = markov_similarity(&MarkovChainSpec::new(12, 0, 1), 2).unwrap();
/// let order = spectral_order(&a).unwrap();
/// assert_eq!(kendall_tau(&truth, &order, true).unwrap(), 1.0);
/// ```
pub fn markov_similarity(spec: &MarkovChainSpec, permute_seed: u64) -> Result<(SimilarityMatrix, Permutation)> {
    let corr = abs_correlation(&spec.covariance()?);
    let mut rng = ChaCha8Rng::seed_from_u64(permute_seed);
    let truth = Permutation::random(spec.n, &mut rng);
    let a = SimilarityMatrix::symmetrized(truth.inverse().reorder_symmetric(&corr))?;
    Ok((a, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_r_matrix, RobinsonCheck};

    #[test]
    fn exact_similarity_is_robinson_in_chain_order() {
        let mut spec = MarkovChainSpec::new(30, 0, 0);
        spec.coefficients = vec![0.9; 29];
        let (a, truth) = markov_similarity(&spec, 3).unwrap();
        assert!(is_r_matrix(&a.reordered(&truth).unwrap(), RobinsonCheck::default()).is_robinson);
    }

    #[test]
    fn exact_and_sampled_covariances_agree() {
        let spec = MarkovChainSpec::new(5, 200_000, 9);
        let exact = MarkovChainSpec { samples: 0, ..spec.clone() }.covariance().unwrap();
        let sampled = spec.covariance().unwrap();
        assert!((exact - sampled).abs().max() < 0.05);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = MarkovChainSpec::new(4, 1, 0);
        assert!(spec.covariance().is_err());
        spec.samples = 0;
        spec.noise[2] = 0.0;
        assert!(spec.covariance().is_err());
        let (a, _) = markov_similarity(&MarkovChainSpec::new(2, 0, 0), 0).unwrap();
        assert_eq!(a.n(), 2);
    }

    #[test]
    fn reproducible_from_seeds() {
        let spec = MarkovChainSpec::new(8, 60, 4);
        assert_eq!(markov_similarity(&spec, 1).unwrap(), markov_similarity(&spec, 1).unwrap());
    }
}
