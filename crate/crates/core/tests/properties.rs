mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seriation::datasets::{markov_similarity, synthetic_pre_r, MarkovChainSpec};
use seriation::io::{format_permutation, parse_permutation};
use seriation::metrics::{kendall_tau, spearman_rho};
use seriation::objective::{two_sum_objective, WeightVector};
use seriation::permutation::Permutation;
use seriation::relax::{
    build_constraints, project_doubly_stochastic, stochastic_deviation, ConstraintSpec, ProjectionOptions,
};
use seriation::rounding::{sample_from_matrix, sinkhorn};
use seriation::spectral::spectral_order;
use seriation::structure::{is_r_matrix, RobinsonCheck};
use seriation::SimilarityMatrix;

fn perm(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sym(n: usize, seed: u64) -> SimilarityMatrix {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..1.0));
    SimilarityMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlations_symmetric_and_relabeling_invariant(n in 2usize..30, s in any::<u64>()) {
        let (p, q, r) = (perm(n, s), perm(n, s ^ 1), perm(n, s ^ 2));
        for f in [kendall_tau, spearman_rho] {
            let pq = f(&p, &q, false).unwrap();
            prop_assert!((-1.0..=1.0).contains(&pq));
            prop_assert!((pq - f(&q, &p, false).unwrap()).abs() < 1e-12);
            let relabeled = f(&r.then(&p).unwrap(), &r.then(&q).unwrap(), false).unwrap();
            prop_assert!((pq - relabeled).abs() < 1e-12);
            let oriented = pq.max(f(&p, &q.reversed(), false).unwrap());
            prop_assert_eq!(f(&p, &q, true).unwrap(), oriented);
        }
    }

    #[test]
    fn objective_is_half_double_sum(n in 1usize..15, s in any::<u64>()) {
        let a = sym(n, s);
        let p = perm(n, s ^ 3);
        let y = WeightVector::ramp(n);
        let f = two_sum_objective(&a, &p, &y).unwrap();
        let positions: Vec<f64> = p.positions().iter().map(|&k| (k + 1) as f64).collect();
        let direct = common::direct_two_sum(a.entries(), &positions);
        prop_assert!((f - direct).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn reordering_composes(n in 1usize..12, s in any::<u64>()) {
        let a = sym(n, s);
        let (p, q) = (perm(n, s ^ 4), perm(n, s ^ 5));
        let twice = a.reordered(&p).unwrap().reordered(&q).unwrap();
        let once = a.reordered(&p.then(&q).unwrap()).unwrap();
        prop_assert_eq!(twice, once);
        prop_assert!(p.then(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn permutation_text_round_trip(n in 1usize..40, s in any::<u64>()) {
        let p = perm(n, s);
        prop_assert_eq!(parse_permutation(&format_permutation(&p)).unwrap(), p);
    }

    #[test]
    fn noiseless_pre_r_is_recovered_spectrally(n in 3usize..25, extra in 0usize..20, s in any::<u64>()) {
        let (a, truth) = synthetic_pre_r(n, 2 * (n - 1) + extra, 0.0, s).unwrap();
        prop_assert!(is_r_matrix(&a.reordered(&truth).unwrap(), RobinsonCheck::default()).is_robinson);
        let order = spectral_order(&a).unwrap();
        prop_assert_eq!(kendall_tau(&truth, &order, true).unwrap(), 1.0);
    }

    #[test]
    fn exact_markov_similarity_is_robinson(n in 3usize..30, s in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut spec = MarkovChainSpec::new(n, 0, s);
        spec.coefficients = (0..n - 1).map(|_| rng.random_range(0.05..2.0)).collect();
        spec.noise = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
        let (a, truth) = markov_similarity(&spec, s ^ 7).unwrap();
        let audit = is_r_matrix(&a.reordered(&truth).unwrap(), RobinsonCheck { strict: false, tolerance: 1e-12 });
        prop_assert!(audit.is_robinson, "{} violations", audit.violations);
    }

    #[test]
    fn projection_lands_in_feasible_set(n in 2usize..7, k in 0usize..4, s in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let hidden = Permutation::random(n, &mut rng).into_order();
        let specs: Vec<ConstraintSpec> = (0..k)
            .map(|_| {
                let a = rng.random_range(0..n - 1);
                let b = rng.random_range(a + 1..n);
                ConstraintSpec::Order { i: hidden[a], j: hidden[b] }
            })
            .collect();
        let set = build_constraints(n, &specs).unwrap();
        let g: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let pi0 = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..2.0));
        let opts = ProjectionOptions { tolerance: 1e-9, max_sweeps: 100_000 };
        let p = project_doubly_stochastic(&pi0, &set, &g, &opts, None).unwrap();
        prop_assert!(p.converged);
        prop_assert!(p.solution.min() >= 0.0);
        prop_assert!(stochastic_deviation(&p.solution).unwrap() <= 1e-7);
        prop_assert!(set.max_violation(&p.solution, &g) <= 1e-7);
        prop_assert!((p.primal - 0.5 * (&p.solution - &pi0).norm_squared()).abs() <= 1e-9);
    }

    #[test]
    fn rounding_reports_its_objective(n in 2usize..15, k in 1usize..40, s in any::<u64>()) {
        use rand::Rng;
        let a = sym(n, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 9);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.01..1.0));
        let r = sample_from_matrix(&m, &a, k, s).unwrap();
        let recomputed = two_sum_objective(&a, &r.best, &WeightVector::ramp(n)).unwrap();
        prop_assert!((r.objective - recomputed).abs() <= 1e-9 * recomputed.max(1.0));
        prop_assert_eq!(r.trace.len(), k);
        // a longer run with the same seed only adds draws
        let longer = sample_from_matrix(&m, &a, k + 10, s).unwrap();
        prop_assert!(longer.objective <= r.objective);
    }

    #[test]
    fn sinkhorn_first_step_grows_substochastic_input(n in 2usize..20, s in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut m: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.01..1.0));
        let largest = m.row_sum().max().max(m.column_sum().max());
        m /= largest * rng.random_range(1.0f64..2.0);
        let out = sinkhorn(&m, 10_000, 1e-10).unwrap();
        prop_assert!(out.norm_trace[1] > out.norm_trace[0]);
        prop_assert!(stochastic_deviation(out.matrix.entries()).unwrap() <= 1e-9);
    }
}
