//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use nalgebra::DMatrix;
use rand::Rng;
use seriation::cut::CutMatrix;
use seriation::permutation::{for_each_permutation, Permutation};
use seriation::relax::ConstraintSet;
use seriation::SimilarityMatrix;

pub mod lemmas;

/// `½ Σ_ij A_ij (z_i − z_j)²` by direct double summation.
pub fn direct_two_sum(a: &DMatrix<f64>, z: &[f64]) -> f64 {
    let n = z.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += a[(i, j)] * (z[i] - z[j]).powi(2);
        }
    }
    0.5 * total
}

/// Cost of an order (`order[k]` at position `k + 1`) by direct summation.
pub fn order_cost(a: &DMatrix<f64>, order: &[usize]) -> f64 {
    let mut z = vec![0.0; order.len()];
    for (k, &item) in order.iter().enumerate() {
        z[item] = (k + 1) as f64;
    }
    direct_two_sum(a, &z)
}

/// Every order attaining the minimum 2-SUM cost (relative tolerance `rel`).
pub fn brute_force_minimizers(a: &DMatrix<f64>, rel: f64) -> (f64, Vec<Vec<usize>>) {
    let n = a.nrows();
    let mut costs = Vec::new();
    for_each_permutation(n, |p| costs.push((order_cost(a, p), p.to_vec())));
    let best = costs.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let cutoff = best + rel * best.abs().max(1.0);
    (best, costs.into_iter().filter(|c| c.0 <= cutoff).map(|c| c.1).collect())
}

/// Strict pre-R fixture: every prefix and suffix CUT plus random interior
/// CUTs with positive weights, so that every Robinson inequality is strict.
/// Returns the matrix in its natural order.
pub fn strict_robinson<R: Rng>(n: usize, extra: usize, rng: &mut R) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        CutMatrix::new(0, i, rng.random_range(0.5..1.5)).unwrap().add_to(&mut m);
        CutMatrix::new(i, n - 1, rng.random_range(0.5..1.5)).unwrap().add_to(&mut m);
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(u..n);
        CutMatrix::new(u, v, rng.random_range(0.0..1.0)).unwrap().add_to(&mut m);
    }
    m
}

pub fn permuted(m: &DMatrix<f64>, perm: &Permutation) -> SimilarityMatrix {
    SimilarityMatrix::new(perm.reorder_symmetric(m)).unwrap()
}

/// Euclidean projection onto the constrained doubly stochastic set by an
/// interior-point QP solve.
pub fn qp_projection(pi0: &DMatrix<f64>, constraints: &ConstraintSet, g: &[f64]) -> DMatrix<f64> {
    match try_qp_projection(pi0, constraints, g) {
        Ok(m) => m,
        Err(status) => panic!("oracle status {status:?}"),
    }
}

/// Like [`qp_projection`], returning the solver status when it is not solved.
pub fn try_qp_projection(
    pi0: &DMatrix<f64>,
    constraints: &ConstraintSet,
    g: &[f64],
) -> Result<DMatrix<f64>, SolverStatus> {
    let n = pi0.nrows();
    let vars = n * n;
    let idx = |i: usize, j: usize| i + j * n;
    let p = CscMatrix::identity(vars);
    let q: Vec<f64> = (0..vars).map(|k| -pi0[(k % n, k / n)]).collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut b = Vec::new();
    for i in 0..n {
        let mut r = vec![0.0; vars];
        for j in 0..n {
            r[idx(i, j)] = 1.0;
        }
        rows.push(r);
        b.push(1.0);
    }
    // the last column sum is implied by the others
    for j in 0..n - 1 {
        let mut r = vec![0.0; vars];
        for i in 0..n {
            r[idx(i, j)] = 1.0;
        }
        rows.push(r);
        b.push(1.0);
    }
    let equalities = rows.len();
    for k in 0..vars {
        let mut r = vec![0.0; vars];
        r[k] = -1.0;
        rows.push(r);
        b.push(0.0);
    }
    for c in constraints.columns() {
        let mut r = vec![0.0; vars];
        for j in 0..n {
            r[idx(c.plus, j)] += g[j];
            r[idx(c.minus, j)] -= g[j];
        }
        rows.push(r);
        b.push(-c.offset);
    }
    let inequalities = rows.len() - equalities;
    let a = CscMatrix::from(rows.iter().map(|r| r.iter()));
    let cones = [SupportedConeT::ZeroConeT(equalities), SupportedConeT::NonnegativeConeT(inequalities)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .tol_gap_abs(1e-12)
        .tol_gap_rel(1e-12)
        .tol_feas(1e-12)
        .max_iter(500)
        .build()
        .unwrap();
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).unwrap();
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            Ok(DMatrix::from_fn(n, n, |i, j| solver.solution.x[idx(i, j)]))
        }
        status => Err(status),
    }
}
