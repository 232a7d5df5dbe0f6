//! Convex relaxation of 2-SUM over doubly stochastic matrices, optional
//! ordering constraints, and the solvers.
//!
//! The usual entry point is [`solve_relaxation`]:
//!
//! ```
//! use seriation::relax::{build_constraints, build_y, solve_relaxation, SolverConfig};
//! use seriation::SimilarityMatrix;
//!
//! let a = SimilarityMatrix::from_rows(&[
//!     vec![0.0, 3.0, 1.0, 0.0],
//!     vec![3.0, 0.0, 2.0, 1.0],
//!     vec![1.0, 2.0, 0.0, 3.0],
//!     vec![0.0, 1.0, 3.0, 0.0],
//! ]).unwrap();
//! let y = build_y(4, 8, 0.5, 7).unwrap();
//! let constraints = build_constraints(4, &[]).unwrap();
//! let report = solve_relaxation(&a, &y, &constraints, &SolverConfig::default()).unwrap();
//! assert!(report.final_objective() <= report.objective_trace[0]);
//! ```

mod apg;
mod assignment;
mod constraints;
mod ensemble;
mod frank_wolfe;
mod interior;
mod objective;
mod projection;
mod report;

pub use apg::apg_solve;
pub use assignment::solve_assignment;
pub use constraints::{
    build_constraints, format_constraints, parse_constraints, read_constraints, ConstraintColumn, ConstraintSet,
    ConstraintSpec,
};
pub use ensemble::{build_y, EnsembleWeights};
pub use frank_wolfe::{frank_wolfe_solve, linear_minimization_oracle};
pub use interior::{interior_point_solve, INTERIOR_POINT_MAX_N};
pub use objective::{center_columns, centered_norm_sq, mu_bound, relaxed_gradient, relaxed_objective, QuadraticModel};
pub use projection::{project_doubly_stochastic, Projection, ProjectionDuals, ProjectionOptions};
pub use report::{stochastic_deviation, Algorithm, DoublyStochasticMatrix, SolverConfig, SolverReport};

use crate::error::{Result, SeriationError};
use crate::similarity::SimilarityMatrix;

/// Rejects a model whose `μ` exceeds its convexity bound.
fn check_mu(model: &QuadraticModel) -> Result<()> {
    if model.mu < 0.0 || !model.mu.is_finite() {
        return Err(SeriationError::InvalidParameter(format!("mu = {}", model.mu)));
    }
    if model.mu == 0.0 {
        return Ok(());
    }
    let bound = model.convexity_bound()?;
    if model.mu > bound * (1.0 + 1e-9) {
        return Err(SeriationError::InfeasibleMu { mu: model.mu, bound });
    }
    Ok(())
}

/// Builds the model with `μ = mu_fraction · λ₂(L)·λ₁(YYᵀ)` and runs the
/// configured solver. Frank-Wolfe only accepts the bare symmetry-breaking
/// constraint set, and leaves symmetry to the rounding step.
pub fn solve_relaxation(
    a: &SimilarityMatrix,
    y: &EnsembleWeights,
    constraints: &ConstraintSet,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let l = a.laplacian();
    let bound = mu_bound(&l, y)?;
    if !(config.mu_fraction >= 0.0) {
        return Err(SeriationError::InvalidParameter(format!("mu fraction {}", config.mu_fraction)));
    }
    let mu = config.mu_fraction * bound;
    if config.mu_fraction > 1.0 {
        return Err(SeriationError::InfeasibleMu { mu, bound });
    }
    let model = QuadraticModel::new(l, y, mu)?;
    match config.algorithm {
        Algorithm::FrankWolfe => {
            if constraints.len() > 1 {
                return Err(SeriationError::InvalidParameter(
                    "Frank-Wolfe supports no ordering constraints; use the projected gradient solver".into(),
                ));
            }
            frank_wolfe_solve(&model, config)
        }
        Algorithm::AcceleratedProjectedGradient => apg_solve(&model, constraints, config),
        Algorithm::InteriorPoint => interior_point_solve(&model, constraints, config),
        Algorithm::Auto if a.n() <= INTERIOR_POINT_MAX_N => match interior_point_solve(&model, constraints, config) {
            Err(SeriationError::SolverFailure(reason)) => {
                log::warn!("{reason}; falling back to projected gradient");
                apg_solve(&model, constraints, config)
            }
            other => other,
        },
        Algorithm::Auto => apg_solve(&model, constraints, config),
    }
}
