use serde::{Deserialize, Serialize};

use super::{run_parallel, split_seed, ExperimentOutput, RunRow};
use crate::datasets::{markov_similarity, sample_order_constraints, MarkovChainSpec};
use crate::error::Result;
use crate::metrics::evaluate;
use crate::pipeline::{seriate_qp, QpOptions};
use crate::spectral::spectral_order;

/// Constraint fractions of the semi-supervised rows.
pub const TABLE_FRACTIONS: [f64; 3] = [0.002, 0.046, 0.543];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovConfig {
    pub n: usize,
    /// 0 observes the exact model covariance.
    pub samples: usize,
    pub runs: usize,
    pub seed: u64,
    /// Rows for `qp_reg` (no constraints) are produced when true.
    pub unconstrained: bool,
    pub fractions: Vec<f64>,
    pub error_rate: f64,
    pub qp: QpOptions,
    pub jobs: usize,
}

impl Default for MarkovConfig {
    fn default() -> Self {
        Self {
            n: 30,
            samples: 60,
            runs: 100,
            seed: 0,
            unconstrained: true,
            fractions: TABLE_FRACTIONS.to_vec(),
            error_rate: 0.0,
            qp: QpOptions::default(),
            jobs: 0,
        }
    }
}

impl MarkovConfig {
    pub fn setting(&self) -> String {
        if self.samples == 0 {
            "exact".into()
        } else {
            format!("samples={}", self.samples)
        }
    }
}

/// Spectral, unconstrained QP and QP with a fraction of the true pairwise
/// orders, on randomly relabeled Markov chains.
pub fn run_markov(cfg: &MarkovConfig) -> Result<ExperimentOutput> {
    let setting = cfg.setting();
    let rows = run_parallel(cfg.runs, cfg.jobs, |run| {
        let seed = split_seed(cfg.seed, run as u64);
        let spec = MarkovChainSpec::new(cfg.n, cfg.samples, split_seed(seed, 0));
        let (a, truth) = markov_similarity(&spec, split_seed(seed, 1))?;
        let row = |method: &str, fraction: f64, perm: &crate::permutation::Permutation| -> Result<RunRow> {
            let e = evaluate(&a, perm, Some(&truth), None)?;
            Ok(RunRow {
                experiment: "markov".into(),
                setting: setting.clone(),
                method: method.into(),
                constraint_fraction: fraction,
                run,
                seed,
                tau: e.tau,
                rho: e.rho,
                objective: e.objective,
                r_violations: e.r_violations,
            })
        };
        let mut rows = vec![row("spectral", 0.0, &spectral_order(&a)?)?];
        let qp = QpOptions { seed: split_seed(seed, 2), ..cfg.qp.clone() };
        if cfg.unconstrained {
            rows.push(row("qp_reg", 0.0, &seriate_qp(&a, &[], &qp)?.permutation)?);
        }
        for (k, &fraction) in cfg.fractions.iter().enumerate() {
            let sample = sample_order_constraints(&truth, fraction, cfg.error_rate, split_seed(seed, 3 + k as u64))?;
            rows.push(row("qp_semi", fraction, &seriate_qp(&a, &sample.specs, &qp)?.permutation)?);
        }
        Ok(rows)
    })?;
    Ok(ExperimentOutput::from_rows(rows, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_table_grid() {
        let cfg = MarkovConfig { n: 10, runs: 2, jobs: 1, ..Default::default() };
        let out = run_markov(&cfg).unwrap();
        let methods: Vec<(&str, f64)> =
            out.rows[..5].iter().map(|r| (r.method.as_str(), r.constraint_fraction)).collect();
        assert_eq!(
            methods,
            vec![("spectral", 0.0), ("qp_reg", 0.0), ("qp_semi", 0.002), ("qp_semi", 0.046), ("qp_semi", 0.543)]
        );
        assert_eq!(out.aggregates.len(), 5);
        assert_eq!(run_markov(&MarkovConfig { jobs: 2, ..cfg }).unwrap(), out);
    }
}
