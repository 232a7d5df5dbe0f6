//! CUT matrices and the deflation that writes `a ∘ aᵀ` as their conic
//! combination for unimodal `a`.

use nalgebra::DMatrix;

use crate::error::{Result, SeriationError};

/// `weight · CUT(u, v)`: equal to `weight` on the square block `[u, v] × [u, v]`
/// (diagonal included) and zero elsewhere. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutMatrix {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl CutMatrix {
    pub fn new(u: usize, v: usize, weight: f64) -> Result<Self> {
        if u > v {
            return Err(SeriationError::InvalidParameter(format!("CUT({u}, {v}) has u > v")));
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(SeriationError::InvalidParameter(format!("CUT weight {weight} is negative")));
        }
        Ok(Self { u, v, weight })
    }

    pub fn block_len(&self) -> usize {
        self.v - self.u + 1
    }

    pub fn contains(&self, i: usize) -> bool {
        self.u <= i && i <= self.v
    }

    pub fn dense(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        self.add_to(&mut m);
        m
    }

    pub fn add_to(&self, m: &mut DMatrix<f64>) {
        for j in self.u..=self.v {
            for i in self.u..=self.v {
                m[(i, j)] += self.weight;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutDecomposition {
    pub terms: Vec<CutMatrix>,
    /// Frobenius norm of `Σ terms − a ∘ aᵀ`.
    pub residual_norm: f64,
}

impl CutDecomposition {
    pub fn reconstruct(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for t in &self.terms {
            t.add_to(&mut m);
        }
        m
    }
}

/// Decomposes `M = a ∘ aᵀ` (entries `min(a_i, a_j)`) into CUT matrices by
/// repeated deflation of the argmax interval.
///
/// Each step takes the maximal argmax interval `I`, the maximum `ā` and the
/// largest value `b` outside `I` (0 if `I` covers everything), emits
/// `(ā − b)·CUT(I)` and lowers `a` on `I` by `ā − b`. The argmax set grows
/// every step, so there are at most `n` terms.
pub fn cut_decomposition(a: &[f64]) -> Result<CutDecomposition> {
    let n = a.len();
    if let Some(i) = a.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SeriationError::InvalidEntry { row: i, col: 0 });
    }
    let mut work = a.to_vec();
    let mut terms = Vec::new();
    loop {
        let top = work.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            break;
        }
        let first = work.iter().position(|&v| v == top).unwrap();
        let last = work.iter().rposition(|&v| v == top).unwrap();
        if let Some(gap) = (first..=last).find(|&i| work[i] != top) {
            return Err(SeriationError::NonUnimodal { index: gap });
        }
        let below =
            work.iter().enumerate().filter(|&(i, _)| i < first || i > last).map(|(_, &v)| v).fold(0.0, f64::max);
        let step = top - below;
        terms.push(CutMatrix::new(first, last, step)?);
        for v in &mut work[first..=last] {
            // set exactly, so the next argmax set merges without rounding
            *v = below;
        }
        debug_assert!(terms.len() <= n);
    }
    let target = DMatrix::from_fn(n, n, |i, j| a[i].min(a[j]));
    let decomposition = CutDecomposition { residual_norm: 0.0, terms };
    let residual_norm = (decomposition.reconstruct(n) - target).norm();
    Ok(CutDecomposition { residual_norm, ..decomposition })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_two_one() {
        let d = cut_decomposition(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(d.terms, vec![CutMatrix::new(1, 1, 1.0).unwrap(), CutMatrix::new(0, 2, 1.0).unwrap()]);
        assert_eq!(d.residual_norm, 0.0);
    }

    #[test]
    fn constant_vector_is_one_block() {
        let d = cut_decomposition(&[2.5; 6]).unwrap();
        assert_eq!(d.terms, vec![CutMatrix::new(0, 5, 2.5).unwrap()]);
    }

    #[test]
    fn zero_vector_is_empty() {
        let d = cut_decomposition(&[0.0; 4]).unwrap();
        assert!(d.terms.is_empty());
        assert_eq!(cut_decomposition(&[]).unwrap().terms.len(), 0);
    }

    #[test]
    fn rejects_valleys_and_negatives() {
        assert!(matches!(cut_decomposition(&[1.0, 0.0, 1.0]), Err(SeriationError::NonUnimodal { .. })));
        assert!(matches!(cut_decomposition(&[2.0, 1.0, 0.0, 1.0]), Err(SeriationError::NonUnimodal { .. })));
        assert!(cut_decomposition(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn plateau_argmax_is_one_interval() {
        let d = cut_decomposition(&[0.0, 3.0, 3.0, 1.0]).unwrap();
        assert_eq!(d.terms[0], CutMatrix::new(1, 2, 2.0).unwrap());
        assert_eq!(d.residual_norm, 0.0);
    }

    #[test]
    fn cut_bounds() {
        assert!(CutMatrix::new(3, 2, 1.0).is_err());
        assert!(CutMatrix::new(0, 0, -1.0).is_err());
        let c = CutMatrix::new(1, 2, 2.0).unwrap();
        assert_eq!(
            c.dense(4),
            DMatrix::from_row_slice(4, 4, &[0., 0., 0., 0., 0., 2., 2., 0., 0., 2., 2., 0., 0., 0., 0., 0.,])
        );
    }
}
