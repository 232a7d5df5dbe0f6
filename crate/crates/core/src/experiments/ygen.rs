use serde::{Deserialize, Serialize};

use super::{run_parallel, split_seed, ExperimentOutput, RunRow};
use crate::datasets::{markov_similarity, MarkovChainSpec};
use crate::error::Result;
use crate::metrics::evaluate;
use crate::pipeline::{seriate_qp, QpOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YgenConfig {
    pub n: usize,
    pub samples: usize,
    /// Values of `p/n` swept.
    pub p_fractions: Vec<f64>,
    /// Random `Y` per value of `p`.
    pub runs: usize,
    pub seed: u64,
    pub qp: QpOptions,
    pub jobs: usize,
}

impl Default for YgenConfig {
    fn default() -> Self {
        Self {
            n: 30,
            samples: 60,
            p_fractions: vec![0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0],
            runs: 20,
            seed: 0,
            qp: QpOptions::default(),
            jobs: 0,
        }
    }
}

/// Rounded 2-SUM objective of the unconstrained relaxation on one Markov
/// instance, for random `Y` with a varying number of columns.
pub fn run_ygen(cfg: &YgenConfig) -> Result<ExperimentOutput> {
    let spec = MarkovChainSpec::new(cfg.n, cfg.samples, split_seed(cfg.seed, u64::MAX));
    let (a, truth) = markov_similarity(&spec, split_seed(cfg.seed, u64::MAX - 1))?;
    let per_p = cfg.runs;
    let rows = run_parallel(cfg.p_fractions.len() * per_p, cfg.jobs, |index| {
        let (k, run) = (index / per_p, index % per_p);
        let p_fraction = cfg.p_fractions[k];
        let seed = split_seed(cfg.seed, run as u64);
        let qp = QpOptions { p_fraction, seed, ..cfg.qp.clone() };
        let out = seriate_qp(&a, &[], &qp)?;
        let e = evaluate(&a, &out.permutation, Some(&truth), None)?;
        Ok(vec![RunRow {
            experiment: "ygen".into(),
            setting: format!("p/n={p_fraction}"),
            method: "qp_reg".into(),
            constraint_fraction: 0.0,
            run,
            seed,
            tau: e.tau,
            rho: e.rho,
            objective: e.objective,
            r_violations: e.r_violations,
        }])
    })?;
    Ok(ExperimentOutput::from_rows(rows, None))
}
