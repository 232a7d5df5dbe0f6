//! Direct solve of the relaxation by a primal-dual interior-point method.
//!
//! The relaxation is badly conditioned: the Hessian eigenvalues are the
//! products `λ_k(L)·λ_j(YYᵀ)`, and with `Y` close to rank one their spread
//! easily exceeds 10⁶. Gradient methods then crawl along the nearly flat
//! directions that decide the rounded order. For small `n` the full
//! quadratic program (`n²` variables, dense Hessian) is cheap enough to
//! hand to a conic solver.

use std::time::Instant;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use nalgebra::DMatrix;

use super::check_mu;
use super::constraints::ConstraintSet;
use super::objective::QuadraticModel;
use super::report::{Algorithm, DoublyStochasticMatrix, SolverConfig, SolverReport};
use crate::error::{Result, SeriationError};

/// Largest `n` solved with [`Algorithm::InteriorPoint`] under
/// [`Algorithm::Auto`]. The dense KKT factorization costs `O(n⁶)`.
pub const INTERIOR_POINT_MAX_N: usize = 32;

/// Upper triangle of the Hessian `(2/p)(G ⊗ L − μ I ⊗ P)` on column-major
/// `vec(Π)`, so that `½ xᵀ H x = f(Π)`.
fn hessian_upper(model: &QuadraticModel) -> CscMatrix<f64> {
    let n = model.n();
    let (l, g) = (&model.laplacian, &model.gram);
    let scale = 2.0 / model.p as f64;
    let inv_n = 1.0 / n as f64;
    let vars = n * n;
    let mut colptr = Vec::with_capacity(vars + 1);
    let mut rowval = Vec::with_capacity(vars * (vars + 1) / 2);
    let mut nzval = Vec::with_capacity(vars * (vars + 1) / 2);
    colptr.push(0);
    for col_pos in 0..n {
        for col_item in 0..n {
            for row_pos in 0..=col_pos {
                let last = if row_pos == col_pos { col_item } else { n - 1 };
                for row_item in 0..=last {
                    let mut h = g[(row_pos, col_pos)] * l[(row_item, col_item)];
                    if row_pos == col_pos {
                        let centering = if row_item == col_item { 1.0 - inv_n } else { -inv_n };
                        h -= model.mu * centering;
                    }
                    rowval.push(row_item + row_pos * n);
                    nzval.push(scale * h);
                }
            }
            colptr.push(rowval.len());
        }
    }
    CscMatrix::new(vars, vars, colptr, rowval, nzval)
}

/// Constraint rows: row sums, all but the last column sum (implied),
/// `−Π ≤ 0`, then `DᵀΠg ≤ −δ`.
fn constraint_matrix(constraints: &ConstraintSet, g: &[f64]) -> (CscMatrix<f64>, Vec<f64>, usize, usize) {
    let n = g.len();
    let vars = n * n;
    let equalities = 2 * n - 1;
    let columns = constraints.columns();
    let mut touching: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (k, c) in columns.iter().enumerate() {
        touching[c.plus].push((k, 1.0));
        touching[c.minus].push((k, -1.0));
    }
    let base = equalities + vars;
    let mut colptr = vec![0];
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    for j in 0..n {
        for i in 0..n {
            rowval.push(i);
            nzval.push(1.0);
            if j + 1 < n {
                rowval.push(n + j);
                nzval.push(1.0);
            }
            rowval.push(equalities + i + j * n);
            nzval.push(-1.0);
            for &(k, sign) in &touching[i] {
                rowval.push(base + k);
                nzval.push(sign * g[j]);
            }
            colptr.push(rowval.len());
        }
    }
    let rows = base + columns.len();
    let mut b = vec![1.0; equalities];
    b.extend(std::iter::repeat_n(0.0, vars));
    b.extend(columns.iter().map(|c| -c.offset));
    (CscMatrix::new(rows, vars, colptr, rowval, nzval), b, equalities, rows - equalities)
}

pub fn interior_point_solve(
    model: &QuadraticModel,
    constraints: &ConstraintSet,
    config: &SolverConfig,
) -> Result<SolverReport> {
    check_mu(model)?;
    let n = model.n();
    if constraints.n() != n {
        return Err(SeriationError::DimensionMismatch { expected: n, got: constraints.n() });
    }
    let start = Instant::now();
    let g: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let mut p = hessian_upper(model);
    // the Hessian scales like p·n⁴; bring it to unit size for the solver
    let scale = p.nzval.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    p.nzval.iter_mut().for_each(|v| *v /= scale);
    let q = vec![0.0; n * n];
    let (a, b, equalities, inequalities) = constraint_matrix(constraints, &g);
    let cones = [SupportedConeT::ZeroConeT(equalities), SupportedConeT::NonnegativeConeT(inequalities)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(config.max_iters.min(u32::MAX as usize) as u32)
        .build()
        .map_err(|e| SeriationError::InvalidParameter(format!("interior-point settings: {e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
        .map_err(|e| SeriationError::InvalidParameter(format!("interior-point setup: {e:?}")))?;
    solver.solve();
    let sol = &solver.solution;
    let converged = match sol.status {
        SolverStatus::Solved => true,
        SolverStatus::AlmostSolved => false,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            return Err(SeriationError::LikelyInfeasible(format!(
                "interior-point solver certified infeasibility ({:?})",
                sol.status
            )));
        }
        status => {
            return Err(SeriationError::SolverFailure(format!(
                "interior-point solver stopped with {status:?} after {} iterations",
                sol.iterations
            )));
        }
    };
    // interior iterates can sit a hair below zero
    let pi = DMatrix::from_fn(n, n, |i, j| sol.x[i + j * n].max(0.0));
    let objective = model.objective(&pi);
    let gap = (sol.obj_val - sol.obj_val_dual).abs() / sol.obj_val.abs().max(1e-12);
    if !converged {
        log::warn!("interior-point solve only reached {:?} (relative gap {gap:.3e})", sol.status);
    }
    Ok(SolverReport {
        solution: Some(DoublyStochasticMatrix::new_unchecked(pi)),
        algorithm: Algorithm::InteriorPoint,
        mu: model.mu,
        objective_trace: vec![objective],
        gap_trace: vec![gap],
        final_gap: gap,
        iterations: sol.iterations as usize,
        converged,
        projection_sweeps: 0,
        wall_time_secs: start.elapsed().as_secs_f64(),
        seed: config.seed,
    })
}
