mod common;

use clarabel::solver::SolverStatus;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seriation::relax::{build_constraints, project_doubly_stochastic, ConstraintSpec, ProjectionOptions};

#[test]
fn matches_interior_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let opts = ProjectionOptions { tolerance: 1e-11, max_sweeps: 200_000 };
    let mut worst = 0.0f64;
    let mut infeasible = 0;
    for trial in 0..50 {
        let n = rng.random_range(3..=5);
        let k = rng.random_range(0..=3);
        let specs: Vec<ConstraintSpec> = (0..k)
            .map(|_| {
                let i = rng.random_range(0..n);
                let j = (i + rng.random_range(1..n)) % n;
                ConstraintSpec::Order { i, j }
            })
            .collect();
        let set = build_constraints(n, &specs).unwrap();
        let g: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let pi0 = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..1.5));
        let ours = match project_doubly_stochastic(&pi0, &set, &g, &opts, None) {
            Ok(p) => p,
            Err(e) => {
                // random specs may contradict each other; the oracle must agree
                let status = common::try_qp_projection(&pi0, &set, &g).unwrap_err();
                println!("trial {trial}: {e} ({status:?})");
                assert!(matches!(status, SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible));
                infeasible += 1;
                continue;
            }
        };
        assert!(ours.converged, "trial {trial}: sweeps {} gap {:e}", ours.sweeps, ours.gap);
        let oracle = common::qp_projection(&pi0, &set, &g);
        let d = (&ours.solution - &oracle).norm();
        worst = worst.max(d);
        println!("trial {trial}: n={n} k={k} sweeps={} dist={d:.2e} gap={:.2e}", ours.sweeps, ours.gap);
    }
    assert!(worst <= 1e-6, "worst distance {worst:e}");
    assert!(infeasible < 50);
}
