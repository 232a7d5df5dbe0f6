use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::projection::ProjectionOptions;
use crate::error::{Result, SeriationError};

/// Nonnegative matrix with unit row and column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct DoublyStochasticMatrix {
    entries: DMatrix<f64>,
}

impl DoublyStochasticMatrix {
    pub const DEFAULT_TOL: f64 = 1e-8;

    pub fn new(entries: DMatrix<f64>, tol: f64) -> Result<Self> {
        if let Some(deviation) = stochastic_deviation(&entries) {
            if deviation <= tol {
                return Ok(Self { entries });
            }
            return Err(SeriationError::InvalidParameter(format!(
                "matrix is {deviation:.3e} away from doubly stochastic"
            )));
        }
        Err(SeriationError::NotSquare { rows: entries.nrows(), cols: entries.ncols() })
    }

    /// The barycenter `11ᵀ/n`.
    pub fn uniform(n: usize) -> Self {
        Self { entries: DMatrix::from_element(n, n, 1.0 / n as f64) }
    }

    pub(crate) fn new_unchecked(entries: DMatrix<f64>) -> Self {
        Self { entries }
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
}

/// Largest deviation from the doubly stochastic constraints: row sums,
/// column sums, and negative entries. `None` if `m` is not square.
pub fn stochastic_deviation(m: &DMatrix<f64>) -> Option<f64> {
    if m.nrows() != m.ncols() {
        return None;
    }
    let rows = m.row_iter().map(|r| (r.sum() - 1.0).abs());
    let cols = m.column_iter().map(|c| (c.sum() - 1.0).abs());
    let neg = m.iter().map(|&v| (-v).max(0.0));
    Some(rows.chain(cols).chain(neg).fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    FrankWolfe,
    AcceleratedProjectedGradient,
    InteriorPoint,
    /// Interior point up to `INTERIOR_POINT_MAX_N` items, projected
    /// gradient beyond.
    #[default]
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// `μ` as a fraction of the convexity bound `λ₂(L)·λ₁(YYᵀ)`.
    pub mu_fraction: f64,
    pub max_iters: usize,
    /// Stopping threshold: Frank-Wolfe gap (relative to `max(1, |f|)`) or
    /// gradient-mapping norm (relative to its first value) for APG.
    pub tolerance: f64,
    pub projection: ProjectionOptions,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::default(),
            mu_fraction: 0.9,
            max_iters: 500,
            tolerance: 1e-6,
            projection: ProjectionOptions { tolerance: 1e-6, max_sweeps: 2000 },
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    #[serde(skip)]
    pub solution: Option<DoublyStochasticMatrix>,
    pub algorithm: Algorithm,
    pub mu: f64,
    pub objective_trace: Vec<f64>,
    /// Frank-Wolfe gap or gradient-mapping norm, per iteration.
    pub gap_trace: Vec<f64>,
    pub final_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub projection_sweeps: usize,
    pub wall_time_secs: f64,
    pub seed: u64,
}

impl SolverReport {
    pub fn final_objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(f64::NAN)
    }

    pub fn solution(&self) -> &DoublyStochasticMatrix {
        self.solution.as_ref().expect("report built by a solver carries its solution")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_sums() {
        assert!(DoublyStochasticMatrix::new(DMatrix::identity(3, 3), 1e-12).is_ok());
        assert!(DoublyStochasticMatrix::new(DMatrix::from_element(2, 2, 0.6), 1e-8).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[1.5, -0.5, -0.5, 1.5]);
        assert!(DoublyStochasticMatrix::new(neg, 1e-8).is_err());
        assert!(DoublyStochasticMatrix::new(DMatrix::zeros(2, 3), 1e-8).is_err());
        let u = DoublyStochasticMatrix::uniform(4);
        assert!(stochastic_deviation(u.entries()).unwrap() < 1e-15);
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cfg = SolverConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"algorithm\":\"auto\""));
        assert_eq!(serde_json::from_str::<SolverConfig>(&text).unwrap(), cfg);
    }
}
