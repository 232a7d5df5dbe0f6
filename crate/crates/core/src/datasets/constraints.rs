//! Random pairwise order constraints drawn from a known ordering.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::relax::ConstraintSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderSample {
    pub specs: Vec<ConstraintSpec>,
    /// Number of specs whose orientation was flipped against the truth.
    pub flipped: usize,
    /// `ln n / n`, above which the random pair graph is connected with high
    /// probability.
    pub connectivity_threshold: f64,
    pub above_threshold: bool,
}

impl OrderSample {
    /// Fraction of the `n(n−1)/2` pairs that received a spec.
    pub fn fraction(&self, n: usize) -> f64 {
        if n < 2 {
            return 0.0;
        }
        self.specs.len() as f64 / (n * (n - 1) / 2) as f64
    }
}

/// Keeps every unordered pair with probability `p` and orients it as in
/// `truth`, flipped with probability `error_rate`.
///
/// ```
/// use seriation::datasets::sample_order_constraints;
/// use seriation::permutation::Permutation;
///
/// let truth = Permutation::identity(10);
/// let all = sample_order_constraints(&truth, 1.0, 0.0, 3).unwrap();
/// assert_eq!(all.specs.len(), 45);
/// assert!(sample_order_constraints(&truth, 0.0, 0.0, 3).unwrap().specs.is_empty());
/// ```
pub fn sample_order_constraints(truth: &Permutation, p: f64, error_rate: f64, seed: u64) -> Result<OrderSample> {
    for (name, v) in [("pair probability", p), ("error rate", error_rate)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(SeriationError::InvalidParameter(format!("{name} {v} outside [0, 1]")));
        }
    }
    let n = truth.len();
    let order = truth.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    let mut flipped = 0;
    for k in 0..n {
        for l in (k + 1)..n {
            if !(rng.random::<f64>() < p) {
                continue;
            }
            let flip = rng.random::<f64>() < error_rate;
            let (i, j) = if flip { (order[l], order[k]) } else { (order[k], order[l]) };
            flipped += usize::from(flip);
            specs.push(ConstraintSpec::Order { i, j });
        }
    }
    let connectivity_threshold = if n > 1 { (n as f64).ln() / n as f64 } else { 0.0 };
    Ok(OrderSample { specs, flipped, connectivity_threshold, above_threshold: p > connectivity_threshold })
}
