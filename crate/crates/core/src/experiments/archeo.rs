use serde::{Deserialize, Serialize};

use super::{run_parallel, split_seed, ExperimentOutput, RunRow};
use crate::datasets::{bundled_dataset, load_binary_matrix, row_similarity, synthetic_c1p, C1pSpec, MUNSINGEN_FILE};
use crate::error::Result;
use crate::metrics::evaluate;
use crate::permutation::Permutation;
use crate::pipeline::{seriate_qp, QpOptions};
use crate::similarity::SimilarityMatrix;
use crate::spectral::spectral_order_by_component;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcheoConfig {
    /// Synthetic instances used when no bundled matrix is found.
    pub runs: usize,
    pub seed: u64,
    pub flip_fraction: f64,
    /// Also run the unconstrained relaxation.
    pub with_qp: bool,
    pub qp: QpOptions,
    pub jobs: usize,
}

impl Default for ArcheoConfig {
    fn default() -> Self {
        Self { runs: 100, seed: 0, flip_fraction: 0.1, with_qp: true, qp: QpOptions::default(), jobs: 0 }
    }
}

fn rows_for(
    cfg: &ArcheoConfig,
    setting: &str,
    run: usize,
    seed: u64,
    a: &SimilarityMatrix,
    truth: &Permutation,
) -> Result<Vec<RunRow>> {
    let row = |method: &str, perm: &Permutation| -> Result<RunRow> {
        let e = evaluate(a, perm, Some(truth), None)?;
        Ok(RunRow {
            experiment: "archeo".into(),
            setting: setting.into(),
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
    let mut rows = vec![row("spectral", &spectral_order_by_component(a)?)?];
    if cfg.with_qp {
        let qp = QpOptions { seed: split_seed(seed, 1), ..cfg.qp.clone() };
        rows.push(row("qp_reg", &seriate_qp(a, &[], &qp)?.permutation)?);
    }
    Ok(rows)
}

/// Grave × artifact seriation. Uses `$SERIATE_DATA_DIR/munsingen.csv` with
/// its rows taken as the reference order when present; otherwise runs on
/// synthetic 59 × 70 consecutive-ones matrices and says so in the notice.
pub fn run_archeo(cfg: &ArcheoConfig) -> Result<ExperimentOutput> {
    if let Some(path) = bundled_dataset(MUNSINGEN_FILE) {
        let c = load_binary_matrix(&path)?;
        let a = row_similarity(&c)?;
        let truth = Permutation::identity(a.n());
        let rows = rows_for(cfg, "munsingen", 0, cfg.seed, &a, &truth)?;
        return Ok(ExperimentOutput::from_rows(rows, None));
    }
    let notice = format!(
        "{MUNSINGEN_FILE} not found under $SERIATE_DATA_DIR; using {} synthetic 59x70 consecutive-ones matrices \
         with {}% of the ones flipped",
        cfg.runs,
        cfg.flip_fraction * 100.0
    );
    log::warn!("{notice}");
    let rows = run_parallel(cfg.runs, cfg.jobs, |run| {
        let seed = split_seed(cfg.seed, run as u64);
        let spec = C1pSpec { flip_fraction: cfg.flip_fraction, ..C1pSpec::munsingen_like(split_seed(seed, 0)) };
        let (c, truth) = synthetic_c1p(&spec)?;
        rows_for(cfg, "synthetic", run, seed, &row_similarity(&c)?, &truth)
    })?;
    Ok(ExperimentOutput::from_rows(rows, Some(notice)))
}
