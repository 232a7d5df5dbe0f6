//! Dense linear assignment by shortest augmenting paths with dual
//! potentials (Jonker-Volgenant style, `O(n³)`).

use nalgebra::DMatrix;

use crate::error::{Result, SeriationError};

/// Minimizes `Σ_i cost[i][σ(i)]` over bijections `σ`. Returns `σ` as
/// `row → column` together with the optimal cost. Ties are resolved toward
/// the lowest column index.
///
/// ```
/// use nalgebra::DMatrix;
/// use seriation::relax::solve_assignment;
///
/// let (sigma, total) = solve_assignment(&-DMatrix::<f64>::identity(3, 3)).unwrap();
/// assert_eq!(sigma, vec![0, 1, 2]);
/// assert_eq!(total, -3.0);
/// ```
pub fn solve_assignment(cost: &DMatrix<f64>) -> Result<(Vec<usize>, f64)> {
    let n = cost.nrows();
    if cost.ncols() != n {
        return Err(SeriationError::NotSquare { rows: n, cols: cost.ncols() });
    }
    if let Some(idx) = cost.iter().position(|v| !v.is_finite()) {
        return Err(SeriationError::InvalidEntry { row: idx % n.max(1), col: idx / n.max(1) });
    }
    // 1-based internally; column 0 is the virtual source
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut sigma = vec![0; n];
    for j in 1..=n {
        sigma[owner[j] - 1] = j - 1;
    }
    let total = sigma.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
    Ok((sigma, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::for_each_permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 0..7 {
            for _ in 0..20 {
                let cost = DMatrix::from_fn(n, n, |_, _| rng.random_range(-5.0..5.0));
                let (sigma, total) = solve_assignment(&cost).unwrap();
                let mut best = f64::INFINITY;
                for_each_permutation(n, |p| {
                    best = best.min(p.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum());
                });
                if n == 0 {
                    best = 0.0;
                }
                assert!((total - best).abs() < 1e-9);
                let mut seen = sigma.clone();
                seen.sort_unstable();
                assert_eq!(seen, (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn ties_prefer_low_columns() {
        let (sigma, _) = solve_assignment(&DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(sigma, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_non_square() {
        assert!(solve_assignment(&DMatrix::zeros(2, 3)).is_err());
    }
}
