use nalgebra::{DMatrix, DVector};

use super::{FiedlerMethod, FiedlerResult};
use crate::error::Result;
use crate::linalg::symmetric_eigen;

/// Relative eigenvalue gap below which the Fiedler value counts as repeated.
pub(super) const MULTIPLICITY_TOL: f64 = 1e-8;

pub(super) fn fiedler(l: &DMatrix<f64>) -> Result<FiedlerResult> {
    let n = l.nrows();
    let (values, vectors) = symmetric_eigen(l)?;
    let scale = values[n - 1].abs().max(1.0);
    let multiplicity_warning = n >= 3 && values[2] - values[1] <= MULTIPLICITY_TOL * scale;
    Ok(FiedlerResult {
        value: values[1],
        vector: DVector::from_column_slice(vectors.column(1).as_slice()),
        multiplicity_warning,
        method: FiedlerMethod::Dense,
        iterations: 0,
    })
}
