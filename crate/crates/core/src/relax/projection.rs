//! Euclidean projection onto doubly stochastic matrices with extra
//! position constraints,
//!
//! ```text
//! minimize ½‖Π − Π₀‖²  s.t.  Π1 = 1, Πᵀ1 = 1, Π ≥ 0, DᵀΠg + δ ≤ 0,
//! ```
//!
//! by block-coordinate ascent on the dual. With multipliers `x, y` for the
//! equalities, `Z ≥ 0` for `Π ≥ 0` and `z ≥ 0` for the position
//! constraints, stationarity gives `Π = Π₀ − M + Z` with
//! `M = x1ᵀ + 1yᵀ + (Dz)gᵀ`, and the dual function is
//!
//! ```text
//! −½‖M − Z‖² − ⟨Z, Π₀⟩ + xᵀ(Π₀1 − 1) + yᵀ(Π₀ᵀ1 − 1) + zᵀ(DᵀΠ₀g + δ).
//! ```
//!
//! Each sweep maximizes it exactly over `Z`, then `x`, then `y`, then every
//! coordinate of `z` in turn. The coordinate pass for `z` solves the same
//! block as the closed form `(DᵀD)⁻¹` update when `D` has orthogonal
//! columns, and stays valid when `D` is rank deficient (more constraints
//! than items, or repeated constraints).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::constraints::ConstraintSet;
use crate::error::{Result, SeriationError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    /// Target for the relative duality gap and for the primal infeasibility.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self { tolerance: 1e-7, max_sweeps: 10_000 }
    }
}

/// Dual variables, reusable as a warm start.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDuals {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub solution: DMatrix<f64>,
    pub duals: ProjectionDuals,
    pub sweeps: usize,
    /// `½‖Π − Π₀‖²` at the returned point.
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    /// Largest violation of the row sums, column sums and position
    /// constraints (entries are nonnegative by construction).
    pub infeasibility: f64,
    pub converged: bool,
}

impl Projection {
    /// Turns a projection that stopped on the sweep cap into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(SeriationError::GapNotReached { sweeps: self.sweeps, gap: self.gap, infeasibility: self.infeasibility })
        }
    }
}

/// Projects `pi0` onto `{Π doubly stochastic : DᵀΠg + δ ≤ 0}`.
///
/// Hitting the sweep cap is not an error: the last iterate is returned with
/// `converged == false` and a warning is logged. A dual value above the
/// largest possible primal value certifies an empty feasible set and is
/// reported as [`SeriationError::LikelyInfeasible`].
pub fn project_doubly_stochastic(
    pi0: &DMatrix<f64>,
    constraints: &ConstraintSet,
    g: &[f64],
    options: &ProjectionOptions,
    warm_start: Option<&ProjectionDuals>,
) -> Result<Projection> {
    let n = pi0.nrows();
    if pi0.ncols() != n {
        return Err(SeriationError::NotSquare { rows: n, cols: pi0.ncols() });
    }
    for got in [constraints.n(), g.len()] {
        if got != n {
            return Err(SeriationError::DimensionMismatch { expected: n, got });
        }
    }
    let columns = constraints.columns();
    if let Some(column) = columns.iter().position(|c| c.norm_sq() == 0.0) {
        return Err(SeriationError::RankDeficientD { column });
    }

    let nf = n as f64;
    let sum_g: f64 = g.iter().sum();
    let g_sq: f64 = g.iter().map(|v| v * v).sum();
    let row0: Vec<f64> = pi0.row_iter().map(|r| r.sum()).collect();
    let col0: Vec<f64> = pi0.column_iter().map(|c| c.sum()).collect();
    let pi0g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| pi0[(i, j)] * g[j]).sum()).collect();
    // d_kᵀΠ₀g + δ_k never changes
    let lin_z: Vec<f64> = columns.iter().map(|c| c.apply(&pi0g) + c.offset).collect();
    let primal_cap = 0.5 * (pi0.norm() + nf.sqrt()).powi(2);

    let (mut x, mut y, mut z) = match warm_start {
        Some(d) if d.x.len() == n && d.y.len() == n && d.z.len() == columns.len() => {
            (d.x.clone(), d.y.clone(), d.z.clone())
        }
        _ => (vec![0.0; n], vec![0.0; n], vec![0.0; columns.len()]),
    };
    let mut w = vec![0.0; n];
    for (c, &zk) in columns.iter().zip(&z) {
        w[c.plus] += zk;
        w[c.minus] -= zk;
    }

    let mut pi = DMatrix::zeros(n, n);
    let mut z_row = vec![0.0; n];
    let mut z_col = vec![0.0; n];
    let mut z_g = vec![0.0; n];
    let mut sweeps = 0;
    loop {
        // Z = max(0, M − Π₀), Π = max(0, Π₀ − M), plus everything the
        // stopping test and the next block updates need from them
        z_row.fill(0.0);
        z_col.fill(0.0);
        z_g.fill(0.0);
        let mut pi_row = vec![0.0; n];
        let mut pi_col = vec![0.0; n];
        let mut pi_g = vec![0.0; n];
        let mut dist_sq = 0.0;
        let mut w_sq = 0.0;
        let mut z_dot_pi0 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let m = x[i] + y[j] + w[i] * g[j];
                let p0 = pi0[(i, j)];
                let diff = p0 - m;
                if diff >= 0.0 {
                    pi[(i, j)] = diff;
                    pi_row[i] += diff;
                    pi_col[j] += diff;
                    pi_g[i] += diff * g[j];
                    dist_sq += m * m;
                    w_sq += m * m;
                } else {
                    pi[(i, j)] = 0.0;
                    let zij = -diff;
                    z_row[i] += zij;
                    z_col[j] += zij;
                    z_g[i] += zij * g[j];
                    z_dot_pi0 += zij * p0;
                    dist_sq += p0 * p0;
                    w_sq += p0 * p0;
                }
            }
        }
        let primal = 0.5 * dist_sq;
        let dual = -0.5 * w_sq - z_dot_pi0
            + x.iter().zip(&row0).map(|(a, r)| a * (r - 1.0)).sum::<f64>()
            + y.iter().zip(&col0).map(|(b, c)| b * (c - 1.0)).sum::<f64>()
            + z.iter().zip(&lin_z).map(|(a, l)| a * l).sum::<f64>();
        let infeasibility = pi_row
            .iter()
            .chain(&pi_col)
            .map(|s| (s - 1.0).abs())
            .chain(columns.iter().map(|c| c.apply(&pi_g) + c.offset))
            .fold(0.0, f64::max);
        let gap = primal - dual;
        let converged = gap <= options.tolerance * primal.max(1.0) && infeasibility <= options.tolerance;
        if dual > primal_cap * (1.0 + 1e-9) + 1e-9 {
            return Err(SeriationError::LikelyInfeasible(format!(
                "dual value {dual:.6e} exceeds every feasible primal value ({primal_cap:.6e})"
            )));
        }
        if converged || sweeps >= options.max_sweeps {
            if !converged {
                log::warn!(
                    "projection stopped after {sweeps} sweeps: gap {gap:.3e}, infeasibility {infeasibility:.3e}"
                );
            }
            return Ok(Projection {
                solution: pi,
                duals: ProjectionDuals { x, y, z },
                sweeps,
                primal,
                dual,
                gap,
                infeasibility,
                converged,
            });
        }
        sweeps += 1;

        let sum_y: f64 = y.iter().sum();
        for i in 0..n {
            x[i] = (row0[i] - 1.0 - sum_y - w[i] * sum_g + z_row[i]) / nf;
        }
        let sum_x: f64 = x.iter().sum();
        let sum_w: f64 = w.iter().sum();
        for j in 0..n {
            y[j] = (col0[j] - 1.0 - sum_x - g[j] * sum_w + z_col[j]) / nf;
        }
        // d_kᵀ1 = 0, so the 1(yᵀg) part of Wg drops out
        for (k, c) in columns.iter().enumerate() {
            let wg = c.apply(&x) * sum_g + c.apply(&w) * g_sq - c.apply(&z_g);
            let grad = lin_z[k] - wg;
            let next = (z[k] + grad / (c.norm_sq() * g_sq)).max(0.0);
            let delta = next - z[k];
            if delta != 0.0 {
                z[k] = next;
                w[c.plus] += delta;
                w[c.minus] -= delta;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::Permutation;
    use crate::relax::constraints::{build_constraints, ConstraintSpec};

    fn ramp(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64).collect()
    }

    fn tight() -> ProjectionOptions {
        ProjectionOptions { tolerance: 1e-10, max_sweeps: 100_000 }
    }

    #[test]
    fn feasible_point_is_fixed() {
        let n = 5;
        let perm = Permutation::from_one_based(&[1, 3, 2, 4, 5]).unwrap();
        let pi0 = perm.matrix() * 0.5 + DMatrix::from_element(n, n, 0.5 / n as f64);
        // expected positions are 2 and 4, so the order holds with slack
        let set = build_constraints(n, &[ConstraintSpec::Order { i: 0, j: 4 }]).unwrap();
        let proj = project_doubly_stochastic(&pi0, &set, &ramp(n), &tight(), None).unwrap();
        assert!(proj.converged);
        assert!((proj.solution - pi0).norm() < 1e-8);
    }

    #[test]
    fn barycenter_with_symmetry_column_is_feasible() {
        for n in 2..8 {
            let pi0 = DMatrix::from_element(n, n, 1.0 / n as f64);
            let set = ConstraintSet::symmetry_only(n).unwrap();
            let proj = project_doubly_stochastic(&pi0, &set, &ramp(n), &tight(), None).unwrap();
            assert!(proj.converged, "n = {n}");
            assert!(proj.infeasibility <= 1e-10);
            assert!(proj.solution.iter().all(|&v| v >= 0.0));
            assert!(set.max_violation(&proj.solution, &ramp(n)) <= 1e-10);
            assert!(proj.gap.abs() <= 1e-8);
        }
    }

    #[test]
    fn plain_birkhoff_projection_of_shifted_identity() {
        // Π₀ = I + c·11ᵀ projects to I
        let n = 4;
        let pi0 = DMatrix::identity(n, n) + DMatrix::from_element(n, n, 0.3);
        let set = build_constraints(n, &[]).unwrap();
        let proj = project_doubly_stochastic(&pi0, &set, &ramp(n), &tight(), None).unwrap();
        assert!((proj.solution - DMatrix::<f64>::identity(n, n)).norm() < 1e-8);
    }

    #[test]
    fn contradiction_is_detected() {
        let n = 4;
        let set = build_constraints(n, &[ConstraintSpec::Order { i: 1, j: 2 }, ConstraintSpec::Order { i: 2, j: 1 }])
            .unwrap();
        let pi0 = DMatrix::from_element(n, n, 0.25);
        let res = project_doubly_stochastic(&pi0, &set, &ramp(n), &ProjectionOptions::default(), None);
        assert!(matches!(res, Err(SeriationError::LikelyInfeasible(_))), "{res:?}");
    }

    #[test]
    fn warm_start_is_faster() {
        let n = 6;
        let set = build_constraints(n, &[ConstraintSpec::Order { i: 4, j: 1 }]).unwrap();
        let pi0 = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0);
        let opts = tight();
        let cold = project_doubly_stochastic(&pi0, &set, &ramp(n), &opts, None).unwrap();
        let warm = project_doubly_stochastic(&pi0, &set, &ramp(n), &opts, Some(&cold.duals)).unwrap();
        assert!(warm.sweeps <= 1);
        assert!((warm.solution - cold.solution).norm() < 1e-8);
    }

    #[test]
    fn sweep_cap_reports_unconverged() {
        let n = 5;
        let set = build_constraints(n, &[ConstraintSpec::Order { i: 4, j: 0 }]).unwrap();
        let pi0 = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 5) as f64);
        let opts = ProjectionOptions { tolerance: 1e-12, max_sweeps: 2 };
        let proj = project_doubly_stochastic(&pi0, &set, &ramp(n), &opts, None).unwrap();
        assert!(!proj.converged);
        assert!(matches!(proj.require_converged(), Err(SeriationError::GapNotReached { .. })));
    }
}
