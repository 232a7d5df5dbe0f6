//! Symmetric nonnegative similarity matrices and their Laplacians.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;

/// Symmetric, entrywise nonnegative `n x n` similarity matrix.
///
/// Symmetry is checked exactly; use [`SimilarityMatrix::symmetrized`] for
/// data that is only symmetric up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    entries: DMatrix<f64>,
}

impl SimilarityMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(SeriationError::NotSquare { rows, cols });
        }
        for j in 0..cols {
            for i in 0..rows {
                let v = entries[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(SeriationError::InvalidEntry { row: i, col: j });
                }
                if i > j && v != entries[(j, i)] {
                    return Err(SeriationError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { entries })
    }

    /// Replaces `entries` by `(entries + entriesᵀ) / 2` before validating.
    pub fn symmetrized(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(SeriationError::NotSquare { rows, cols });
        }
        let sym = (&entries + entries.transpose()) * 0.5;
        Self::new(sym)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(SeriationError::DimensionMismatch { expected: n, got: r.len() });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: DMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        laplacian(self)
    }

    /// Symmetric reordering by `perm` (see [`Permutation::reorder_symmetric`]).
    pub fn reordered(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(SeriationError::DimensionMismatch { expected: self.n(), got: perm.len() });
        }
        Ok(Self { entries: perm.reorder_symmetric(&self.entries) })
    }

    /// Principal submatrix on `items`, in the given order.
    pub fn submatrix(&self, items: &[usize]) -> Self {
        let k = items.len();
        Self { entries: DMatrix::from_fn(k, k, |a, b| self.entries[(items[a], items[b])]) }
    }

    /// Connected components of the graph with an edge wherever the
    /// off-diagonal similarity is positive. Components are listed by their
    /// smallest member, members in increasing order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for v in 0..n {
                    if v != u && label[v] == usize::MAX && self.entries[(u, v)] > 0.0 {
                        label[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }
}

/// Graph Laplacian `L = diag(A·1) − A`.
///
/// Symmetric positive semidefinite with `L·1 = 0`. The diagonal of `A`
/// cancels out and never affects `L`.
pub fn laplacian(a: &SimilarityMatrix) -> DMatrix<f64> {
    let m = a.entries();
    let degrees: DVector<f64> = m.column_sum();
    let mut l = -m.clone();
    for i in 0..m.nrows() {
        l[(i, i)] += degrees[i];
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            SimilarityMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(SeriationError::NotSymmetric { .. })
        ));
        assert!(matches!(
            SimilarityMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(SeriationError::InvalidEntry { .. })
        ));
        assert!(SimilarityMatrix::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn laplacian_of_zero_is_zero() {
        assert_eq!(laplacian(&SimilarityMatrix::zeros(3)), DMatrix::zeros(3, 3));
    }

    #[test]
    fn laplacian_of_path() {
        let a = SimilarityMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert_eq!(laplacian(&a), expected);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let a = SimilarityMatrix::symmetrized(DMatrix::from_fn(7, 7, |i, j| ((i * 3 + j * 5) % 4) as f64)).unwrap();
        let l = laplacian(&a);
        for s in l.column_sum().iter() {
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn components_split_blocks() {
        let a = SimilarityMatrix::from_rows(&[
            vec![1.0, 0.0, 2.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![2.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 5.0],
        ])
        .unwrap();
        assert_eq!(a.components(), vec![vec![0, 2], vec![1], vec![3]]);
        assert!(!a.is_connected());
    }
}
