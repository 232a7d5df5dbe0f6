//! Robinson (R), Petrie (P) and unimodal (Q) matrix predicates and the
//! circular product.

use nalgebra::DMatrix;

use crate::error::{Result, SeriationError};
use crate::similarity::SimilarityMatrix;

/// Outcome of a Robinson audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobinsonAudit {
    pub is_robinson: bool,
    /// Number of failed monotonicity comparisons.
    pub violations: usize,
    /// Number of comparisons made, `(n − 1)²` for `n ≥ 1`.
    pub comparisons: usize,
}

impl RobinsonAudit {
    pub fn violation_density(&self) -> f64 {
        if self.comparisons == 0 {
            0.0
        } else {
            self.violations as f64 / self.comparisons as f64
        }
    }
}

/// Options for [`is_r_matrix`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RobinsonCheck {
    /// Require strict decrease away from the diagonal.
    pub strict: bool,
    /// Absolute slack granted to every comparison.
    pub tolerance: f64,
}

/// Checks the Robinson conditions on the lower triangle,
/// `A[i][j] ≤ A[i][j+1]` and `A[i+1][j] ≤ A[i][j]` for `j < i`, i.e.
/// entries never increase when moving away from the diagonal. Comparisons
/// against the diagonal are included.
pub fn is_r_matrix(a: &SimilarityMatrix, check: RobinsonCheck) -> RobinsonAudit {
    audit_robinson(a.entries(), check)
}

pub(crate) fn audit_robinson(m: &DMatrix<f64>, check: RobinsonCheck) -> RobinsonAudit {
    let n = m.nrows();
    let tol = check.tolerance;
    // `closer` should dominate `farther`
    let fails = |farther: f64, closer: f64| {
        if check.strict {
            farther >= closer - tol
        } else {
            farther > closer + tol
        }
    };
    let mut violations = 0;
    let mut comparisons = 0;
    for j in 0..n {
        for i in (j + 1)..n {
            comparisons += 1;
            if fails(m[(i, j)], m[(i, j + 1)]) {
                violations += 1;
            }
            if i + 1 < n {
                comparisons += 1;
                if fails(m[(i + 1, j)], m[(i, j)]) {
                    violations += 1;
                }
            }
        }
    }
    RobinsonAudit { is_robinson: violations == 0, violations, comparisons }
}

/// Whether `column` rises (weakly) to a maximum and then falls (weakly).
pub fn is_unimodal(column: &[f64]) -> bool {
    let mut falling = false;
    for w in column.windows(2) {
        if w[1] < w[0] {
            falling = true;
        } else if w[1] > w[0] && falling {
            return false;
        }
    }
    true
}

/// Every column unimodal.
pub fn is_q_matrix(a: &DMatrix<f64>) -> bool {
    a.column_iter().all(|c| is_unimodal(c.as_slice()))
}

/// Binary matrix whose ones are consecutive in every column. Returns
/// `false` for matrices with entries outside `{0, 1}`.
pub fn is_p_matrix(a: &DMatrix<f64>) -> bool {
    if a.iter().any(|&v| v != 0.0 && v != 1.0) {
        return false;
    }
    a.column_iter().all(|c| {
        let ones: Vec<usize> = c.iter().enumerate().filter(|(_, &v)| v == 1.0).map(|(i, _)| i).collect();
        ones.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

/// Circular product `(A ∘ B)_ij = Σ_k min(A_ik, B_kj)`.
pub fn circular_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.ncols() != b.nrows() {
        return Err(SeriationError::DimensionMismatch { expected: a.ncols(), got: b.nrows() });
    }
    let inner = a.ncols();
    Ok(DMatrix::from_fn(a.nrows(), b.ncols(), |i, j| (0..inner).map(|k| a[(i, k)].min(b[(k, j)])).sum()))
}

/// `C ∘ Cᵀ` as a similarity matrix. For binary `C` this counts the
/// features shared by every pair of rows.
pub fn square_similarity(c: &DMatrix<f64>) -> Result<SimilarityMatrix> {
    if let Some((idx, _)) = c.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        let (row, col) = (idx % c.nrows(), idx / c.nrows());
        return Err(SeriationError::InvalidEntry { row, col });
    }
    let (n, m) = c.shape();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in j..n {
            let s: f64 = (0..m).map(|k| c[(i, k)].min(c[(j, k)])).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    SimilarityMatrix::new(out)
}
