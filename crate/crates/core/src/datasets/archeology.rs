//! Incidence data (graves × artifact types) and synthetic
//! consecutive-ones matrices.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

/// Environment variable naming the directory of bundled datasets.
pub const DATA_DIR_VAR: &str = "SERIATE_DATA_DIR";

/// File name looked up for the Munsingen grave × artifact matrix.
pub const MUNSINGEN_FILE: &str = "munsingen.csv";

/// Reads a comma separated 0/1 matrix, one row per line. A first line that
/// does not parse as numbers is taken as a header and skipped.
///
/// ```
/// use seriation::datasets::load_binary_matrix;
///
/// let dir = std::env::temp_dir().join("seriation-doc-binary");
/// std::fs::create_dir_all(&dir).unwrap();
/// let path = dir.join("eye.csv");
/// std::fs::write(&path, "1,0\n0,1\n").unwrap();
/// let c = load_binary_matrix(&path).unwrap();
/// assert_eq!(c, nalgebra::DMatrix::<f64>::identity(2, 2));
/// ```
pub fn load_binary_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_binary_matrix(&text)
}

pub fn parse_binary_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if line == 0 => continue,
            Err(e) => return Err(SeriationError::Parse { line: line + 1, message: e.to_string() }),
        };
        if let Some(v) = values.iter().find(|v| **v != 0.0 && **v != 1.0) {
            return Err(SeriationError::Parse { line: line + 1, message: format!("non-binary entry {v}") });
        }
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(SeriationError::Parse {
                    line: line + 1,
                    message: format!("expected {} columns, found {}", first.len(), values.len()),
                });
            }
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(SeriationError::Parse { line: 0, message: "empty matrix".into() });
    }
    let (r, c) = (rows.len(), rows[0].len());
    let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
    let empty = m.row_iter().filter(|row| row.sum() == 0.0).count();
    if empty > 0 {
        log::warn!("{empty} all-zero rows are isolated in the similarity graph");
    }
    Ok(m)
}

/// Row similarity `C Cᵀ` (shared artifact types between graves).
pub fn row_similarity(c: &DMatrix<f64>) -> Result<SimilarityMatrix> {
    SimilarityMatrix::symmetrized(c * c.transpose())
}

/// Path of a bundled dataset under `$SERIATE_DATA_DIR`, if present.
pub fn bundled_dataset(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(DATA_DIR_VAR)?;
    let path = Path::new(&dir).join(name);
    path.is_file().then_some(path)
}

/// Shape and noise of a synthetic consecutive-ones matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C1pSpec {
    pub rows: usize,
    pub cols: usize,
    /// Every column is a run of ones with length uniform on
    /// `[min_run, max_run]`.
    pub min_run: usize,
    pub max_run: usize,
    /// Fraction of the ones switched off, with as many zeros switched on.
    pub flip_fraction: f64,
    pub seed: u64,
}

impl C1pSpec {
    /// 59 × 70, runs of 5 to 20 rows, 10% of the ones flipped.
    pub fn munsingen_like(seed: u64) -> Self {
        Self { rows: 59, cols: 70, min_run: 5, max_run: 20, flip_fraction: 0.1, seed }
    }
}

/// Consecutive-ones matrix with flipped bits and randomly relabeled rows.
/// `truth` orders the rows so that every noiseless column is a run.
pub fn synthetic_c1p(spec: &C1pSpec) -> Result<(DMatrix<f64>, Permutation)> {
    let C1pSpec { rows, cols, min_run, max_run, flip_fraction, seed } = *spec;
    if rows == 0 || cols == 0 || min_run == 0 || min_run > max_run || max_run > rows {
        return Err(SeriationError::InvalidParameter(format!("bad C1P shape {spec:?}")));
    }
    if !(0.0..=1.0).contains(&flip_fraction) {
        return Err(SeriationError::InvalidParameter(format!("flip fraction {flip_fraction}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        let len = rng.random_range(min_run..=max_run);
        let start = rng.random_range(0..=rows - len);
        for i in start..start + len {
            m[(i, j)] = 1.0;
        }
    }
    let ones: Vec<usize> = (0..rows * cols).filter(|&k| m[k] == 1.0).collect();
    let zeros: Vec<usize> = (0..rows * cols).filter(|&k| m[k] == 0.0).collect();
    let k = ((flip_fraction * ones.len() as f64).round() as usize).min(zeros.len());
    for idx in sample(&mut rng, ones.len(), k) {
        m[ones[idx]] = 0.0;
    }
    for idx in sample(&mut rng, zeros.len(), k) {
        m[zeros[idx]] = 1.0;
    }
    let truth = Permutation::random(rows, &mut rng);
    Ok((truth.inverse().reorder_rows(&m), truth))
}
