//! Reading and writing matrices and orderings.
//!
//! Similarity matrices come as dense CSV (comma or whitespace separated)
//! or as MatrixMarket coordinate files. Orderings are one 1-based item
//! index per line.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

/// Dense numeric matrix, one row per line, separated by commas or
/// whitespace. Blank lines and lines starting with `#` are skipped.
pub fn parse_dense(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, content) in text.lines().enumerate() {
        let content = content.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let row = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|e| SeriationError::Parse { line: line + 1, message: format!("{t:?}: {e}") })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(SeriationError::Parse {
                    line: line + 1,
                    message: format!("expected {} values, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(SeriationError::Parse { line: 0, message: "empty matrix".into() });
    }
    Ok(DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]))
}

/// MatrixMarket `coordinate real|integer|pattern general|symmetric`.
pub fn parse_matrix_market(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or(SeriationError::Parse { line: 0, message: "empty file".into() })?;
    let banner = banner.to_ascii_lowercase();
    let fields: Vec<&str> = banner.split_whitespace().collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[2] != "coordinate" {
        return Err(SeriationError::Parse { line: 1, message: "expected a MatrixMarket coordinate banner".into() });
    }
    let pattern = fields[3] == "pattern";
    let symmetric = fields[4] == "symmetric";
    let mut m: Option<DMatrix<f64>> = None;
    for (line, content) in lines {
        let content = content.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        let bad = |message: String| SeriationError::Parse { line: line + 1, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(matrix) = m.as_mut() else {
            let dims: Vec<usize> = tokens
                .iter()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(format!("{e}")))?;
            if dims.len() != 3 {
                return Err(bad("size line needs rows, columns and entries".into()));
            }
            m = Some(DMatrix::zeros(dims[0], dims[1]));
            continue;
        };
        let need = if pattern { 2 } else { 3 };
        if tokens.len() < need {
            return Err(bad(format!("expected {need} fields")));
        }
        let i: usize = tokens[0].parse().map_err(|e| bad(format!("{e}")))?;
        let j: usize = tokens[1].parse().map_err(|e| bad(format!("{e}")))?;
        let v: f64 = if pattern { 1.0 } else { tokens[2].parse().map_err(|e| bad(format!("{e}")))? };
        if i == 0 || j == 0 || i > matrix.nrows() || j > matrix.ncols() {
            return Err(bad(format!("entry ({i}, {j}) out of range")));
        }
        matrix[(i - 1, j - 1)] = v;
        if symmetric {
            matrix[(j - 1, i - 1)] = v;
        }
    }
    m.ok_or(SeriationError::Parse { line: 0, message: "missing size line".into() })
}

/// Loads a matrix, choosing the format from the `.mtx` extension or the
/// MatrixMarket banner.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let is_mtx = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("mtx"))
        || text.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket");
    if is_mtx {
        parse_matrix_market(&text)
    } else {
        parse_dense(&text)
    }
}

pub fn read_similarity(path: impl AsRef<Path>) -> Result<SimilarityMatrix> {
    SimilarityMatrix::new(read_matrix(path)?)
}

pub fn format_dense(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DMatrix<f64>) -> Result<()> {
    Ok(std::fs::write(path, format_dense(m))?)
}

/// One 1-based index per line; `#` comments and blank lines are skipped.
///
/// ```
/// use seriation::io::{format_permutation, parse_permutation};
///
/// let p = parse_permutation("# order\n3\n1\n2\n").unwrap();
/// assert_eq!(p.order(), &[2, 0, 1]);
/// assert_eq!(format_permutation(&p), "3\n1\n2\n");
/// ```
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut order = Vec::new();
    for (line, content) in text.lines().enumerate() {
        let content = content.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let v: usize = content
            .parse()
            .map_err(|e| SeriationError::Parse { line: line + 1, message: format!("{content:?}: {e}") })?;
        order.push(v);
    }
    Permutation::from_one_based(&order)
}

pub fn format_permutation(p: &Permutation) -> String {
    p.to_one_based().iter().map(|i| format!("{i}\n")).collect()
}

pub fn read_permutation(path: impl AsRef<Path>) -> Result<Permutation> {
    parse_permutation(&std::fs::read_to_string(path)?)
}

pub fn write_permutation(path: impl AsRef<Path>, p: &Permutation) -> Result<()> {
    Ok(std::fs::write(path, format_permutation(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_formats() {
        let m = parse_dense("1, 2\n# c\n3 4\n").unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(parse_dense(&format_dense(&m)).unwrap(), m);
        assert!(parse_dense("1,2\n3\n").is_err());
        assert!(parse_dense("1,x\n").is_err());
    }

    #[test]
    fn matrix_market_symmetric() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% note\n3 3 2\n2 1 0.5\n3 3 1\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m[(0, 1)], 0.5);
        assert_eq!(m[(1, 0)], 0.5);
        assert_eq!(m[(2, 2)], 1.0);
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err());
    }

    #[test]
    fn permutation_errors() {
        assert!(parse_permutation("1\n1\n").is_err());
        assert!(parse_permutation("0\n").is_err());
        assert!(parse_permutation("a\n").is_err());
    }
}
