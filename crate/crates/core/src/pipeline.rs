//! End-to-end seriation through the convex relaxation: build `Y`, solve,
//! round.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::permutation::Permutation;
use crate::relax::{build_constraints, build_y, solve_relaxation, ConstraintSpec, SolverConfig, SolverReport};
use crate::rounding::{sample_from_matrix, Rounding, DEFAULT_DRAWS};
use crate::similarity::SimilarityMatrix;

/// Default noise of the columns of `Y` around `g`.
pub const DEFAULT_Y_NOISE: f64 = 0.5;

/// Default number of columns of `Y` as a multiple of `n`.
pub const DEFAULT_P_FRACTION: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpOptions {
    pub solver: SolverConfig,
    /// `p = max(1, round(p_fraction · n))` unless `p_columns` is set.
    pub p_fraction: f64,
    pub p_columns: Option<usize>,
    pub y_noise: f64,
    pub draws: usize,
    /// Seeds `Y` and the rounding stream.
    pub seed: u64,
}

impl Default for QpOptions {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            p_fraction: DEFAULT_P_FRACTION,
            p_columns: None,
            y_noise: DEFAULT_Y_NOISE,
            draws: DEFAULT_DRAWS,
            seed: 0,
        }
    }
}

impl QpOptions {
    pub fn columns(&self, n: usize) -> usize {
        self.p_columns.unwrap_or((self.p_fraction * n as f64).round() as usize).max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpOutcome {
    pub permutation: Permutation,
    /// 2-SUM objective of `permutation` with `g = (1, ..., n)`.
    pub objective: f64,
    pub report: SolverReport,
    pub rounding: Rounding,
}

/// Solves the relaxation of 2-SUM on `a` under `specs` (plus symmetry
/// breaking) and keeps the best rounded permutation.
///
/// ```
/// use seriation::datasets::synthetic_pre_r;
/// use seriation::objective::{two_sum_objective, WeightVector};
/// use seriation::pipeline::{seriate_qp, QpOptions};
///
/// let (a, _) = synthetic_pre_r(8, 14, 0.0, 1).unwrap();
/// let options = QpOptions { draws: 50, ..QpOptions::default() };
/// let out = seriate_qp(&a, &[], &options).unwrap();
/// assert_eq!(out.rounding.trace.len(), 50);
/// assert_eq!(out.objective, two_sum_objective(&a, &out.permutation, &WeightVector::ramp(8)).unwrap());
/// ```
pub fn seriate_qp(a: &SimilarityMatrix, specs: &[ConstraintSpec], options: &QpOptions) -> Result<QpOutcome> {
    let n = a.n();
    let constraints = build_constraints(n, specs)?;
    let y = build_y(n, options.columns(n), options.y_noise, options.seed)?;
    let report = solve_relaxation(a, &y, &constraints, &options.solver)?;
    let rounding = sample_from_matrix(report.solution().entries(), a, options.draws, options.seed)?;
    Ok(QpOutcome { permutation: rounding.best.clone(), objective: rounding.objective, report, rounding })
}
