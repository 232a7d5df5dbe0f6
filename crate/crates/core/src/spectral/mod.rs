//! Spectral seriation: sort the items by the Fiedler vector of the
//! similarity Laplacian.
//!
//! The Fiedler vector minimizes `yᵀ L_A y` over unit vectors orthogonal to
//! the constant vector. For a permuted Robinson matrix with a simple
//! Fiedler value it is monotone in the hidden order, so sorting it recovers
//! that order up to reversal.

mod dense;
mod lanczos;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

/// Largest `n` handled by the dense eigensolver under [`FiedlerMethod::Auto`].
pub const DENSE_LIMIT: usize = 2000;

/// Fiedler values below this are treated as zero (disconnected graph).
pub const DISCONNECTED_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiedlerMethod {
    Dense,
    Iterative,
    /// Dense up to [`DENSE_LIMIT`] items, iterative beyond.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiedlerOptions {
    pub method: FiedlerMethod,
    /// Relative residual target of the iterative solver.
    pub tolerance: f64,
    /// Krylov dimension cap of the iterative solver.
    pub max_iterations: usize,
}

impl Default for FiedlerOptions {
    fn default() -> Self {
        Self { method: FiedlerMethod::Auto, tolerance: 1e-10, max_iterations: 5000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiedlerResult {
    pub value: f64,
    /// Unit norm, orthogonal to the ones vector, first nonzero entry negative.
    pub vector: DVector<f64>,
    /// The third Laplacian eigenvalue is (numerically) equal to the second,
    /// so the vector is not uniquely determined.
    pub multiplicity_warning: bool,
    /// `Dense` or `Iterative`, never `Auto`.
    pub method: FiedlerMethod,
    pub iterations: usize,
}

/// Fiedler value and vector of `L_A`.
///
/// ```
/// use seriation::{fiedler, FiedlerMethod, SimilarityMatrix};
///
/// let path = SimilarityMatrix::from_rows(&[
///     vec![0.0, 1.0, 0.0],
///     vec![1.0, 0.0, 1.0],
///     vec![0.0, 1.0, 0.0],
/// ]).unwrap();
/// let f = fiedler(&path, FiedlerMethod::Dense).unwrap();
/// assert!((f.value - 1.0).abs() < 1e-12);
/// assert!((f.vector[0] + f.vector[2]).abs() < 1e-12 && f.vector[1].abs() < 1e-12);
/// ```
pub fn fiedler(a: &SimilarityMatrix, method: FiedlerMethod) -> Result<FiedlerResult> {
    fiedler_with(a, FiedlerOptions { method, ..FiedlerOptions::default() })
}

pub fn fiedler_with(a: &SimilarityMatrix, options: FiedlerOptions) -> Result<FiedlerResult> {
    let n = a.n();
    if n < 2 {
        return Err(SeriationError::InvalidParameter(format!("the Fiedler vector needs at least 2 items, got {n}")));
    }
    if !a.is_connected() {
        return Err(SeriationError::DisconnectedGraph { fiedler_value: 0.0 });
    }
    let method = match options.method {
        FiedlerMethod::Auto if n <= DENSE_LIMIT => FiedlerMethod::Dense,
        FiedlerMethod::Auto => FiedlerMethod::Iterative,
        m => m,
    };
    let l = a.laplacian();
    let mut result = match method {
        FiedlerMethod::Dense => dense::fiedler(&l)?,
        _ => lanczos::fiedler(&l, options.tolerance, options.max_iterations)?,
    };
    if result.value < DISCONNECTED_TOL {
        return Err(SeriationError::DisconnectedGraph { fiedler_value: result.value });
    }
    normalize(&mut result.vector);
    if result.multiplicity_warning {
        log::warn!("Fiedler value {:.3e} is repeated; the spectral order is not unique", result.value);
    }
    Ok(result)
}

/// Removes the mean, rescales to unit norm and fixes the sign so the first
/// entry that is not negligible is negative.
fn normalize(v: &mut DVector<f64>) {
    let mean = v.mean();
    v.add_scalar_mut(-mean);
    let norm = v.norm();
    if norm > 0.0 {
        *v /= norm;
    }
    let cutoff = 1e-12 * v.amax();
    if let Some(first) = v.iter().copied().find(|x| x.abs() > cutoff) {
        if first > 0.0 {
            v.neg_mut();
        }
    }
}

/// A spectral ordering together with the eigenpair behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralOrdering {
    pub permutation: Permutation,
    pub fiedler: FiedlerResult,
    /// Two or more Fiedler-vector entries coincide (to 1e-12), so the order
    /// of those items fell back to their index order.
    pub repeated_values: bool,
}

/// Stable ascending sort of the Fiedler vector.
///
/// ```
/// use seriation::{spectral_order, SimilarityMatrix};
///
/// let a = SimilarityMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
/// assert_eq!(spectral_order(&a).unwrap().to_one_based(), vec![1, 2]);
/// ```
pub fn spectral_order(a: &SimilarityMatrix) -> Result<Permutation> {
    Ok(spectral_ordering(a, FiedlerOptions::default())?.permutation)
}

pub fn spectral_ordering(a: &SimilarityMatrix, options: FiedlerOptions) -> Result<SpectralOrdering> {
    let fiedler = fiedler_with(a, options)?;
    let values = fiedler.vector.as_slice();
    let permutation = Permutation::argsort(values);
    let repeated_values = permutation.order().windows(2).any(|w| (values[w[1]] - values[w[0]]).abs() <= 1e-12);
    if repeated_values {
        log::warn!("repeated Fiedler vector entries; ties broken by item index");
    }
    Ok(SpectralOrdering { permutation, fiedler, repeated_values })
}

/// Spectral order of every connected component, components concatenated
/// in order of their smallest item. Singletons are placed as they are.
pub fn spectral_order_by_component(a: &SimilarityMatrix) -> Result<Permutation> {
    let mut order = Vec::with_capacity(a.n());
    for members in a.components() {
        if members.len() < 2 {
            order.extend(members);
            continue;
        }
        let sub = spectral_order(&a.submatrix(&members))?;
        order.extend(sub.order().iter().map(|&k| members[k]));
    }
    Permutation::new(order)
}
