//! Seeded experiment drivers producing per-run rows and aggregates.
//!
//! A master seed derives one seed per run with a counter-based split, and
//! each run derives its own sub-seeds from that. Runs execute on a bounded
//! thread pool; rows always come back in run order.

mod archeo;
mod dna;
mod markov;
mod ygen;

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};

pub use archeo::{run_archeo, ArcheoConfig};
pub use dna::{run_dna, DnaConfig};
pub use markov::{run_markov, MarkovConfig, TABLE_FRACTIONS};
pub use ygen::{run_ygen, YgenConfig};

/// SplitMix64 finalizer applied to `master + (index + 1)·γ`.
///
/// ```
/// use seriation::experiments::split_seed;
///
/// assert_eq!(split_seed(7, 3), split_seed(7, 3));
/// assert_ne!(split_seed(7, 3), split_seed(7, 4));
/// ```
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One method evaluated on one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub experiment: String,
    /// Free-form setting label, e.g. the noise regime or `p/n`.
    pub setting: String,
    pub method: String,
    pub constraint_fraction: f64,
    pub run: usize,
    pub seed: u64,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub objective: f64,
    pub r_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub experiment: String,
    pub setting: String,
    pub method: String,
    pub constraint_fraction: f64,
    pub runs: usize,
    pub tau_median: Option<f64>,
    pub tau_stdev: Option<f64>,
    pub rho_median: Option<f64>,
    pub rho_stdev: Option<f64>,
    pub objective_mean: f64,
    pub objective_median: f64,
    pub objective_stdev: f64,
    pub r_violations_median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub rows: Vec<RunRow>,
    pub aggregates: Vec<Aggregate>,
    /// Set when the experiment ran in a substitute mode.
    pub notice: Option<String>,
}

impl ExperimentOutput {
    pub fn from_rows(rows: Vec<RunRow>, notice: Option<String>) -> Self {
        let aggregates = aggregate(&rows);
        Self { rows, aggregates, notice }
    }

    /// Aggregate for a method, setting and constraint fraction.
    pub fn find(&self, method: &str, setting: &str, fraction: f64) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.method == method && a.setting == setting && a.constraint_fraction == fraction)
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (0 for fewer than two values).
pub fn stdev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Groups rows by experiment, setting, method and constraint fraction, in
/// order of first appearance.
pub fn aggregate(rows: &[RunRow]) -> Vec<Aggregate> {
    let mut keys: Vec<(String, String, String, u64)> = Vec::new();
    let mut groups: HashMap<(String, String, String, u64), Vec<&RunRow>> = HashMap::new();
    for row in rows {
        let key = (row.experiment.clone(), row.setting.clone(), row.method.clone(), row.constraint_fraction.to_bits());
        groups.entry(key.clone()).or_insert_with(|| {
            keys.push(key.clone());
            Vec::new()
        });
        groups.get_mut(&key).expect("inserted").push(row);
    }
    keys.into_iter()
        .map(|key| {
            let group = &groups[&key];
            let taus: Vec<f64> = group.iter().filter_map(|r| r.tau).collect();
            let rhos: Vec<f64> = group.iter().filter_map(|r| r.rho).collect();
            let objectives: Vec<f64> = group.iter().map(|r| r.objective).collect();
            let violations: Vec<f64> = group.iter().map(|r| r.r_violations as f64).collect();
            let some = |v: &[f64], f: fn(&[f64]) -> f64| (!v.is_empty()).then(|| f(v));
            Aggregate {
                experiment: key.0,
                setting: key.1,
                method: key.2,
                constraint_fraction: f64::from_bits(key.3),
                runs: group.len(),
                tau_median: some(&taus, median),
                tau_stdev: some(&taus, stdev),
                rho_median: some(&rhos, median),
                rho_stdev: some(&rhos, stdev),
                objective_mean: mean(&objectives),
                objective_median: median(&objectives),
                objective_stdev: stdev(&objectives),
                r_violations_median: median(&violations),
            }
        })
        .collect()
}

/// Runs `run(i)` for `i < runs` on at most `jobs` threads (0 means all
/// cores) and concatenates the rows in run order.
pub fn run_parallel<F>(runs: usize, jobs: usize, run: F) -> Result<Vec<RunRow>>
where
    F: Fn(usize) -> Result<Vec<RunRow>> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SeriationError::InvalidParameter(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<RunRow>>> = pool.install(|| (0..runs).into_par_iter().map(&run).collect());
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub const RUNS_FILE: &str = "runs.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const META_FILE: &str = "run.json";

/// Writes `runs.csv`, `summary.csv` and `run.json` (config and notice)
/// under `dir`, then reloads the CSVs and checks that the summary
/// recomputes from the rows.
pub fn write_outputs<C: Serialize>(
    dir: &Path,
    name: &str,
    config: &C,
    output: &ExperimentOutput,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let runs = dir.join(RUNS_FILE);
    let summary = dir.join(SUMMARY_FILE);
    let meta = dir.join(META_FILE);
    write_csv(&runs, &output.rows)?;
    write_csv(&summary, &output.aggregates)?;
    let json = serde_json::json!({
        "experiment": name,
        "config": config,
        "notice": output.notice,
        "runs": output.rows.len(),
    });
    std::fs::write(
        &meta,
        serde_json::to_string_pretty(&json).map_err(|e| SeriationError::InvalidParameter(e.to_string()))?,
    )?;
    audit_outputs(dir)?;
    Ok(vec![runs, summary, meta])
}

fn write_csv<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for item in items {
        w.serialize(item)?;
    }
    w.flush()?;
    Ok(())
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for item in r.deserialize() {
        out.push(item?);
    }
    Ok(out)
}

/// Reloads `runs.csv` and `summary.csv` from `dir` and verifies that the
/// aggregates recompute from the rows.
pub fn audit_outputs(dir: &Path) -> Result<()> {
    let rows: Vec<RunRow> = read_csv(&dir.join(RUNS_FILE))?;
    let stored: Vec<Aggregate> = read_csv(&dir.join(SUMMARY_FILE))?;
    let fresh = aggregate(&rows);
    if fresh.len() != stored.len() {
        return Err(SeriationError::InvalidParameter(format!(
            "summary has {} groups, rows give {}",
            stored.len(),
            fresh.len()
        )));
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0) || (a.is_nan() && b.is_nan());
    let close_opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => close(a, b),
        (None, None) => true,
        _ => false,
    };
    for (f, s) in fresh.iter().zip(&stored) {
        let ok = f.experiment == s.experiment
            && f.setting == s.setting
            && f.method == s.method
            && close(f.constraint_fraction, s.constraint_fraction)
            && f.runs == s.runs
            && close_opt(f.tau_median, s.tau_median)
            && close_opt(f.tau_stdev, s.tau_stdev)
            && close_opt(f.rho_median, s.rho_median)
            && close_opt(f.rho_stdev, s.rho_stdev)
            && close(f.objective_mean, s.objective_mean)
            && close(f.objective_median, s.objective_median)
            && close(f.objective_stdev, s.objective_stdev)
            && close(f.r_violations_median, s.r_violations_median);
        if !ok {
            return Err(SeriationError::InvalidParameter(format!(
                "summary row {} / {} does not match the runs",
                s.method, s.setting
            )));
        }
    }
    Ok(())
}
