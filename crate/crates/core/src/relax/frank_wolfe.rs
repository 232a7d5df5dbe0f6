//! Conditional gradient over the Birkhoff polytope. The linear
//! minimization oracle is an assignment problem on the gradient.

use std::time::Instant;

use nalgebra::DMatrix;

use super::assignment::solve_assignment;
use super::check_mu;
use super::objective::QuadraticModel;
use super::report::{Algorithm, DoublyStochasticMatrix, SolverConfig, SolverReport};
use crate::error::Result;

/// Vertex of the Birkhoff polytope minimizing `⟨grad, S⟩`.
pub fn linear_minimization_oracle(grad: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (sigma, _) = solve_assignment(grad)?;
    let n = grad.nrows();
    let mut s = DMatrix::zeros(n, n);
    for (i, &j) in sigma.iter().enumerate() {
        s[(i, j)] = 1.0;
    }
    Ok(s)
}

/// Frank-Wolfe with exact line search on the quadratic objective, started
/// at the barycenter. Extra ordering constraints are not supported: the
/// oracle would stop being an assignment problem.
pub fn frank_wolfe_solve(model: &QuadraticModel, config: &SolverConfig) -> Result<SolverReport> {
    check_mu(model)?;
    let start = Instant::now();
    let n = model.n();
    let mut pi = DoublyStochasticMatrix::uniform(n).into_entries();
    let mut objective_trace = Vec::new();
    let mut gap_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iters {
        let (f, grad) = model.objective_and_gradient(&pi);
        let direction = linear_minimization_oracle(&grad)? - &pi;
        let gap = -grad.dot(&direction);
        objective_trace.push(f);
        gap_trace.push(gap);
        if gap <= config.tolerance * f.abs().max(1.0) {
            converged = true;
            break;
        }
        let curvature = model.hessian_form(&direction);
        let step = if curvature > 0.0 { (gap / (2.0 * curvature)).min(1.0) } else { 1.0 };
        pi += direction * step;
        iterations += 1;
    }
    if !converged {
        objective_trace.push(model.objective(&pi));
    }
    Ok(SolverReport {
        solution: Some(DoublyStochasticMatrix::new_unchecked(pi)),
        algorithm: Algorithm::FrankWolfe,
        mu: model.mu,
        final_gap: gap_trace.last().copied().unwrap_or(0.0),
        objective_trace,
        gap_trace,
        iterations,
        converged,
        projection_sweeps: 0,
        wall_time_secs: start.elapsed().as_secs_f64(),
        seed: config.seed,
    })
}
