//! Pre-R test matrices built as conic sums of CUT matrices.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cut::CutMatrix;
use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

/// Random conic combination of `num_cuts` CUT matrices, observed under a
/// random relabeling; `a.reordered(&truth)` is the R-matrix.
///
/// The first `n − 1` terms are the prefix blocks `CUT(0, i)` for `i < n − 1`,
/// the next `n − 1` the suffix blocks `CUT(i, n − 1)` for `i > 0`, the rest
/// random blocks.
/// With `num_cuts ≥ 2(n − 1)` every Robinson inequality is strict. Weights
/// are uniform on `[0.5, 1.5)`. Noise adds symmetric uniform
/// `[0, noise_scale)` perturbations off the diagonal.
///
/// ```
/// use seriation::datasets::synthetic_pre_r;
/// use seriation::structure::{is_r_matrix, RobinsonCheck};
///
/// let (a, truth) = synthetic_pre_r(10, 18, 0.0, 4).unwrap();
/// let ordered = a.reordered(&truth).unwrap();
/// assert!(is_r_matrix(&ordered, RobinsonCheck { strict: true, tolerance: 0.0 }).is_robinson);
/// ```
pub fn synthetic_pre_r(
    n: usize,
    num_cuts: usize,
    noise_scale: f64,
    seed: u64,
) -> Result<(SimilarityMatrix, Permutation)> {
    if n == 0 {
        return Err(SeriationError::InvalidParameter("n must be positive".into()));
    }
    if !(noise_scale >= 0.0 && noise_scale.is_finite()) {
        return Err(SeriationError::InvalidParameter(format!("noise scale {noise_scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for t in 0..num_cuts {
        let (u, v) = if n > 1 && t < n - 1 {
            (0, t)
        } else if n > 1 && t < 2 * (n - 1) {
            (t - (n - 1) + 1, n - 1)
        } else {
            let u = rng.random_range(0..n);
            (u, rng.random_range(u..n))
        };
        CutMatrix::new(u, v, rng.random_range(0.5..1.5))?.add_to(&mut m);
    }
    if noise_scale > 0.0 {
        for j in 0..n {
            for i in (j + 1)..n {
                let e = noise_scale * rng.random::<f64>();
                m[(i, j)] += e;
                m[(j, i)] += e;
            }
        }
    }
    let truth = Permutation::random(n, &mut rng);
    let a = SimilarityMatrix::new(truth.inverse().reorder_symmetric(&m))?;
    Ok((a, truth))
}
