//! Orderings of `n` items.
//!
//! A [`Permutation`] is stored as an *order*: `order[k]` is the item placed
//! at position `k`. Everything is 0-based in memory; files and reports use
//! 1-based indices (see [`Permutation::to_one_based`]).
//!
//! The matching permutation matrix `Π` maps items to positions,
//! `Π[item][position] = 1`, so that for the weight vector `g = (1, ..., n)`
//! the product `Πg` holds the (1-based) position of every item. This is the
//! convention the relaxations and constraint encodings rely on.

use std::fmt;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, SeriationError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    /// Validates that `order` is a bijection on `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n {
                return Err(SeriationError::InvalidPermutation(format!("index {i} out of range for length {n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(SeriationError::InvalidPermutation(format!("index {i} appears twice")));
            }
        }
        Ok(Self { order })
    }

    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        let zero_based = order
            .iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| SeriationError::InvalidPermutation("1-based index 0".to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based)
    }

    pub fn identity(n: usize) -> Self {
        Self { order: (0..n).collect() }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self { order }
    }

    /// Stable ascending argsort: items with equal keys keep index order.
    /// NaN keys sort last.
    pub fn argsort(keys: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
        Self { order }
    }

    /// Ordering obtained by reading a position-assignment matrix (items by
    /// positions) row-wise and keeping the argmax column for each item.
    /// Only meaningful for permutation matrices.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SeriationError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let n = m.nrows();
        let mut order = vec![usize::MAX; n];
        for item in 0..n {
            let row = m.row(item);
            let (pos, _) = row
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (j, &v)| if v > best.1 { (j, v) } else { best });
            order[pos] = item;
        }
        if order.contains(&usize::MAX) {
            return Err(SeriationError::InvalidPermutation("matrix rows do not select distinct positions".to_string()));
        }
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.order.iter().map(|&i| i + 1).collect()
    }

    /// `positions()[item]` is the position of `item` in this ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &item) in self.order.iter().enumerate() {
            pos[item] = k;
        }
        pos
    }

    /// The inverse map, i.e. the permutation whose order is `positions()`.
    pub fn inverse(&self) -> Self {
        Self { order: self.positions() }
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self { order }
    }

    /// Ordering that first applies `self` and then reads `inner` off it:
    /// `result[k] = self[inner[k]]`.
    ///
    /// If `inner` orders the rows of a matrix that was already reordered by
    /// `self`, the composition orders the original matrix.
    pub fn then(&self, inner: &Permutation) -> Result<Self> {
        if inner.len() != self.len() {
            return Err(SeriationError::DimensionMismatch { expected: self.len(), got: inner.len() });
        }
        Ok(Self { order: inner.order.iter().map(|&k| self.order[k]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Permutation matrix with `Π[item][position] = 1`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (k, &item) in self.order.iter().enumerate() {
            m[(item, k)] = 1.0;
        }
        m
    }

    /// Symmetric reordering `B[k][l] = A[order[k]][order[l]]`.
    pub fn reorder_symmetric(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |k, l| a[(self.order[k], self.order[l])])
    }

    /// Row reordering `B[k][:] = C[order[k]][:]`.
    pub fn reorder_rows(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), c.ncols(), |k, j| c[(self.order[k], j)])
    }

    /// Values assigned to items when `weights[k]` goes to the item at
    /// position `k`: `out[order[k]] = weights[k]`. This is `Πy`.
    pub fn assign(&self, weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (k, &item) in self.order.iter().enumerate() {
            out[item] = weights[k];
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Visits every permutation of `0..n` in lexicographic order.
///
/// Used by the exhaustive oracles; `n` above 10 is impractical.
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        visit(&p);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[2, 1, 3]).is_ok());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..12 {
            let p = Permutation::random(n, &mut rng);
            assert!(p.then(&p.inverse()).unwrap().is_identity());
            assert!(p.inverse().then(&p).unwrap().is_identity());
        }
    }

    #[test]
    fn matrix_maps_items_to_positions() {
        let p = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        let g = nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let positions = p.matrix() * g;
        // item 3 is first, item 1 second, item 2 third
        assert_eq!(positions.as_slice(), &[2.0, 3.0, 1.0]);
        assert_eq!(p.assign(&[1.0, 2.0, 3.0]), vec![2.0, 3.0, 1.0]);
        assert_eq!(Permutation::from_matrix(&p.matrix()).unwrap(), p);
    }

    #[test]
    fn argsort_is_stable() {
        let p = Permutation::argsort(&[0.5, 0.1, 0.5, -1.0]);
        assert_eq!(p.order(), &[3, 1, 0, 2]);
    }

    #[test]
    fn enumerates_all_permutations() {
        let mut count = 0;
        let mut last = Vec::new();
        for_each_permutation(5, |p| {
            count += 1;
            last = p.to_vec();
        });
        assert_eq!(count, 120);
        assert_eq!(last, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn reorder_then_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = DMatrix::from_fn(6, 6, |i, j| (i * 7 + j * 7) as f64);
        let p = Permutation::random(6, &mut rng);
        let q = Permutation::random(6, &mut rng);
        let twice = q.reorder_symmetric(&p.reorder_symmetric(&a));
        assert_eq!(twice, p.then(&q).unwrap().reorder_symmetric(&a));
    }
}
