use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SeriationError};
use crate::linalg::symmetric_eigenvalues;

/// Relative cutoff under which the smallest Gram eigenvalue is reported as 0.
const RANK_TOL: f64 = 1e-10;

/// `n × p` matrix whose columns are sorted random perturbations of
/// `g = (1, ..., n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleWeights {
    pub y: DMatrix<f64>,
    pub noise_scale: f64,
    pub seed: u64,
    /// `λ₁(YYᵀ)`, clamped to 0 when `YYᵀ` is numerically singular.
    pub min_gram_eigenvalue: f64,
    /// `λ_max(YYᵀ)`.
    pub max_gram_eigenvalue: f64,
}

impl EnsembleWeights {
    pub fn n(&self) -> usize {
        self.y.nrows()
    }

    pub fn p(&self) -> usize {
        self.y.ncols()
    }

    /// `G = YYᵀ`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.y * self.y.transpose()
    }

    /// Wraps an explicit weight matrix.
    pub fn from_matrix(y: DMatrix<f64>) -> Result<Self> {
        if y.ncols() == 0 {
            return Err(SeriationError::InvalidParameter("Y needs at least one column".into()));
        }
        let (min_gram_eigenvalue, max_gram_eigenvalue) = gram_extremes(&y)?;
        Ok(Self { y, noise_scale: 0.0, seed: 0, min_gram_eigenvalue, max_gram_eigenvalue })
    }
}

fn gram_extremes(y: &DMatrix<f64>) -> Result<(f64, f64)> {
    let values = symmetric_eigenvalues(&(y * y.transpose()))?;
    let Some(&max) = values.last() else { return Ok((0.0, 0.0)) };
    let min = values[0];
    Ok((if min <= RANK_TOL * max.max(1.0) { 0.0 } else { min }, max))
}

/// Column `j` is `sort(g + noise_scale · u_j)` with `u_j` uniform on
/// `[−1, 1]ⁿ`; columns with ties are drawn again.
pub fn build_y(n: usize, p: usize, noise_scale: f64, seed: u64) -> Result<EnsembleWeights> {
    if p == 0 {
        return Err(SeriationError::InvalidParameter("p must be at least 1".into()));
    }
    if !(noise_scale >= 0.0 && noise_scale.is_finite()) {
        return Err(SeriationError::InvalidParameter(format!("noise scale {noise_scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = DMatrix::zeros(n, p);
    let mut column = vec![0.0; n];
    for j in 0..p {
        loop {
            for (i, c) in column.iter_mut().enumerate() {
                *c = (i + 1) as f64 + noise_scale * rng.random_range(-1.0..=1.0);
            }
            column.sort_by(f64::total_cmp);
            if column.windows(2).all(|w| w[0] < w[1]) {
                break;
            }
        }
        y.column_mut(j).copy_from_slice(&column);
    }
    let (min_gram_eigenvalue, max_gram_eigenvalue) = gram_extremes(&y)?;
    Ok(EnsembleWeights { y, noise_scale, seed, min_gram_eigenvalue, max_gram_eigenvalue })
}
