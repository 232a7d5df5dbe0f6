//! Thin wrappers over the dense symmetric eigensolver.

use nalgebra::DMatrix;

use crate::error::{Result, SeriationError};

fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn evd_failed() -> SeriationError {
    SeriationError::ConvergenceFailure { iterations: 0, residual: f64::NAN }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors (columns)
/// of the symmetric matrix `m`. Only the lower triangle is read.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let evd = to_faer(m).self_adjoint_eigen(faer::Side::Lower).map_err(|_| evd_failed())?;
    let s = evd.S().column_vector();
    let values = (0..n).map(|i| s[i]).collect();
    let u = evd.U();
    Ok((values, DMatrix::from_fn(n, n, |i, j| u[(i, j)])))
}

/// Eigenvalues of the symmetric matrix `m`, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    to_faer(m).self_adjoint_eigenvalues(faer::Side::Lower).map_err(|_| evd_failed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_small_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let back = &vecs * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals)) * vecs.transpose();
        assert!((back - m).norm() < 1e-12);
    }
}
