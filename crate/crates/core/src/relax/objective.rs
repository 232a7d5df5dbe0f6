//! The regularized relaxation
//!
//! ```text
//! f(Π) = (1/p) Tr(Yᵀ Πᵀ L Π Y) − (μ/p) ‖P Π‖²_F,   P = I − 11ᵀ/n
//! ```
//!
//! minimized over doubly stochastic `Π`. Its Hessian is
//! `(1/p)(YYᵀ ⊗ L − μ I ⊗ P)`, positive semidefinite whenever
//! `μ ≤ λ₂(L)·λ₁(YYᵀ)`.

use nalgebra::DMatrix;

use super::ensemble::EnsembleWeights;
use crate::error::{Result, SeriationError};
use crate::linalg::symmetric_eigenvalues;

/// `L`, `G = YYᵀ`, `p` and `μ` bundled for repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticModel {
    pub laplacian: DMatrix<f64>,
    pub gram: DMatrix<f64>,
    pub p: usize,
    pub mu: f64,
}

impl QuadraticModel {
    pub fn new(laplacian: DMatrix<f64>, y: &EnsembleWeights, mu: f64) -> Result<Self> {
        if laplacian.nrows() != y.n() {
            return Err(SeriationError::DimensionMismatch { expected: laplacian.nrows(), got: y.n() });
        }
        Ok(Self { laplacian, gram: y.gram(), p: y.p(), mu })
    }

    pub fn n(&self) -> usize {
        self.laplacian.nrows()
    }

    pub fn objective(&self, pi: &DMatrix<f64>) -> f64 {
        let lp = &self.laplacian * pi;
        self.objective_with(pi, &lp)
    }

    fn objective_with(&self, pi: &DMatrix<f64>, l_pi: &DMatrix<f64>) -> f64 {
        // Tr(Πᵀ L Π G) = ⟨LΠ, ΠG⟩
        let pg = pi * &self.gram;
        (l_pi.dot(&pg) - self.mu * centered_norm_sq(pi)) / self.p as f64
    }

    /// `(2/p)(L Π G − μ P Π)`.
    pub fn gradient(&self, pi: &DMatrix<f64>) -> DMatrix<f64> {
        let mut grad = &self.laplacian * pi * &self.gram;
        grad -= center_columns(pi) * self.mu;
        grad * (2.0 / self.p as f64)
    }

    /// Objective and gradient sharing one product.
    pub fn objective_and_gradient(&self, pi: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let lp = &self.laplacian * pi;
        let f = self.objective_with(pi, &lp);
        let mut grad = lp * &self.gram;
        grad -= center_columns(pi) * self.mu;
        (f, grad * (2.0 / self.p as f64))
    }

    /// Hessian quadratic form `(1/p)(Tr(Vᵀ L V G) − μ ‖P V‖²)`; since `f` is
    /// quadratic, `f(Π + tV) = f(Π) + t⟨∇f, V⟩ + t² · hessian_form(V)`.
    pub fn hessian_form(&self, v: &DMatrix<f64>) -> f64 {
        let lv = &self.laplacian * v;
        self.objective_with(v, &lv)
    }

    /// `λ₂(L)·λ₁(G)`, the largest `μ` keeping this model convex.
    pub fn convexity_bound(&self) -> Result<f64> {
        let l = symmetric_eigenvalues(&self.laplacian)?;
        let g = symmetric_eigenvalues(&self.gram)?;
        if l.len() < 2 {
            return Ok(0.0);
        }
        Ok(clamp_tiny(l[1], l[l.len() - 1]) * clamp_tiny(g[0], g[g.len() - 1]))
    }

    /// Upper bound on the Lipschitz constant of the gradient,
    /// `(2/p) λ_max(L) λ_max(G)`.
    pub fn lipschitz(&self) -> Result<f64> {
        let l_max = symmetric_eigenvalues(&self.laplacian)?.last().copied().unwrap_or(0.0);
        let g_max = symmetric_eigenvalues(&self.gram)?.last().copied().unwrap_or(0.0);
        Ok(2.0 * l_max.max(0.0) * g_max.max(0.0) / self.p as f64)
    }
}

fn clamp_tiny(value: f64, largest: f64) -> f64 {
    if value <= 1e-10 * largest.abs().max(1.0) {
        0.0
    } else {
        value
    }
}

/// `‖PΠ‖²_F = ‖Π‖²_F − ‖1ᵀΠ‖² / n`.
pub fn centered_norm_sq(pi: &DMatrix<f64>) -> f64 {
    let n = pi.nrows() as f64;
    pi.norm_squared() - pi.row_sum().norm_squared() / n
}

/// `PΠ`: every column shifted to mean zero.
pub fn center_columns(pi: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = pi.clone();
    for mut col in out.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    out
}

pub fn relaxed_objective(pi: &DMatrix<f64>, l: &DMatrix<f64>, y: &EnsembleWeights, mu: f64) -> Result<f64> {
    Ok(QuadraticModel::new(l.clone(), y, mu)?.objective(pi))
}

pub fn relaxed_gradient(pi: &DMatrix<f64>, l: &DMatrix<f64>, y: &EnsembleWeights, mu: f64) -> Result<DMatrix<f64>> {
    Ok(QuadraticModel::new(l.clone(), y, mu)?.gradient(pi))
}

/// Largest `μ` keeping the relaxation convex, `λ₂(L)·λ₁(YYᵀ)`. Numerically
/// zero factors are reported as exactly zero.
pub fn mu_bound(l: &DMatrix<f64>, y: &EnsembleWeights) -> Result<f64> {
    let values = symmetric_eigenvalues(l)?;
    if values.len() < 2 {
        return Ok(0.0);
    }
    Ok(clamp_tiny(values[1], values[values.len() - 1]) * y.min_gram_eigenvalue)
}
