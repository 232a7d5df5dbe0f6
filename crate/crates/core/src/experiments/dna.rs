use serde::{Deserialize, Serialize};

use super::{run_parallel, split_seed, ExperimentOutput, RunRow};
use crate::datasets::{assemble, read_similarity, simulate_reads, AssemblyConfig, ReadSimConfig};
use crate::error::Result;
use crate::metrics::evaluate;
use crate::permutation::Permutation;
use crate::spectral::spectral_order_by_component;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnaConfig {
    pub reads: ReadSimConfig,
    pub assembly: AssemblyConfig,
    pub runs: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for DnaConfig {
    fn default() -> Self {
        Self { reads: ReadSimConfig::default(), assembly: AssemblyConfig::default(), runs: 20, seed: 0, jobs: 0 }
    }
}

/// Spectral ordering of simulated reads against the full assembly
/// pipeline. The assembly rows are skipped without mate pairs, where the
/// pipeline reduces to the spectral order.
pub fn run_dna(cfg: &DnaConfig) -> Result<ExperimentOutput> {
    let setting = format!("repeat={}", cfg.reads.repeat_length);
    let rows = run_parallel(cfg.runs, cfg.jobs, |run| {
        let seed = split_seed(cfg.seed, run as u64);
        let reads = simulate_reads(&ReadSimConfig { seed, ..cfg.reads.clone() })?;
        let a = read_similarity(&reads)?;
        let truth = reads.truth();
        let row = |method: &str, perm: &Permutation| -> Result<RunRow> {
            let e = evaluate(&a, perm, Some(&truth), None)?;
            Ok(RunRow {
                experiment: "dna".into(),
                setting: setting.clone(),
                method: method.into(),
                constraint_fraction: 0.0,
                run,
                seed,
                tau: e.tau,
                rho: e.rho,
                objective: e.objective,
                r_violations: e.r_violations,
            })
        };
        let mut rows = vec![row("spectral", &spectral_order_by_component(&a)?)?];
        if cfg.reads.mate_gap > 0 {
            let assembly = AssemblyConfig {
                qp: crate::pipeline::QpOptions { seed: split_seed(seed, 1), ..cfg.assembly.qp.clone() },
                ..cfg.assembly.clone()
            };
            rows.push(row("assembly", &assemble(&reads, &assembly)?.0)?);
        }
        Ok(rows)
    })?;
    Ok(ExperimentOutput::from_rows(rows, None))
}
