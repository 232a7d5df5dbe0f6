//! Linear ordering constraints `DᵀΠg + δ ≤ 0`.
//!
//! With `g = (1, ..., n)`, `Πg` holds the position of every item, so each
//! column of `D` compares the positions of two items. Columns are kept in
//! sparse form: column `(plus, minus, offset)` reads
//! `pos(plus) − pos(minus) + offset ≤ 0`.

use std::fmt;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;

/// A symbolic constraint on item positions (0-based items).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConstraintSpec {
    /// Item `i` comes before item `j`: `pos(i) + 1 ≤ pos(j)`.
    Order { i: usize, j: usize },
    /// `a ≤ pos(i) − pos(j) ≤ b`.
    Distance { i: usize, j: usize, a: f64, b: f64 },
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Order { i, j } => write!(f, "ord {} {}", i + 1, j + 1),
            Self::Distance { i, j, a, b } => write!(f, "dist {} {} {a} {b}", i + 1, j + 1),
        }
    }
}

/// One column of `D` with its `δ` entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintColumn {
    pub plus: usize,
    pub minus: usize,
    pub offset: f64,
}

impl ConstraintColumn {
    /// `d_kᵀ v`.
    pub fn apply(&self, v: &[f64]) -> f64 {
        v[self.plus] - v[self.minus]
    }

    /// `‖d_k‖²`; zero only for a degenerate column.
    pub fn norm_sq(&self) -> f64 {
        if self.plus == self.minus {
            0.0
        } else {
            2.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    n: usize,
    specs: Vec<ConstraintSpec>,
    columns: Vec<ConstraintColumn>,
}

impl ConstraintSet {
    /// Only the symmetry-breaking column `e₁ − e_n`, `δ₁ = 1`.
    pub fn symmetry_only(n: usize) -> Result<Self> {
        build_constraints(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn specs(&self) -> &[ConstraintSpec] {
        &self.specs
    }

    /// Columns of `D`, the symmetry-breaking column first.
    pub fn columns(&self) -> &[ConstraintColumn] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Dense `D` (`n × columns`).
    pub fn d_matrix(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.columns.len());
        for (k, c) in self.columns.iter().enumerate() {
            d[(c.plus, k)] += 1.0;
            d[(c.minus, k)] -= 1.0;
        }
        d
    }

    pub fn delta(&self) -> DVector<f64> {
        DVector::from_iterator(self.columns.len(), self.columns.iter().map(|c| c.offset))
    }

    /// `DᵀΠg + δ`; feasible points have every entry `≤ 0`.
    pub fn residuals(&self, pi: &DMatrix<f64>, g: &[f64]) -> Vec<f64> {
        let pos = pi * DVector::from_column_slice(g);
        self.columns.iter().map(|c| c.apply(pos.as_slice()) + c.offset).collect()
    }

    /// Largest constraint violation `max(0, DᵀΠg + δ)`.
    pub fn max_violation(&self, pi: &DMatrix<f64>, g: &[f64]) -> f64 {
        self.residuals(pi, g).into_iter().fold(0.0, f64::max)
    }

    /// Whether `perm` (with positions `1..n`) satisfies every column.
    pub fn is_satisfied_by(&self, perm: &Permutation) -> bool {
        let pos: Vec<f64> = perm.positions().iter().map(|&p| p as f64 + 1.0).collect();
        self.columns.iter().all(|c| c.apply(&pos) + c.offset <= 1e-9)
    }

    /// Like [`Self::is_satisfied_by`] but ignoring the symmetry-breaking column.
    pub fn specs_satisfied_by(&self, perm: &Permutation) -> bool {
        let pos: Vec<f64> = perm.positions().iter().map(|&p| p as f64 + 1.0).collect();
        self.columns[1..].iter().all(|c| c.apply(&pos) + c.offset <= 1e-9)
    }
}

/// Materializes `specs` on `n` items, prepending the symmetry-breaking
/// column. That column puts item 0 before item `n − 1`, unless the specs
/// already force the opposite, in which case it is flipped so it never
/// makes a consistent set infeasible. Contradictory specs are accepted;
/// infeasibility shows up when solving.
///
/// ```
/// use seriation::relax::{build_constraints, ConstraintSpec};
/// use seriation::permutation::Permutation;
///
/// let set = build_constraints(6, &[ConstraintSpec::Order { i: 1, j: 4 }]).unwrap();
/// assert_eq!(set.len(), 2);
/// let perm = Permutation::from_one_based(&[1, 3, 2, 5, 4, 6]).unwrap();
/// assert!(set.is_satisfied_by(&perm));
/// ```
pub fn build_constraints(n: usize, specs: &[ConstraintSpec]) -> Result<ConstraintSet> {
    if n < 2 {
        return Err(SeriationError::InvalidParameter(format!("constraints need n >= 2, got {n}")));
    }
    let symmetry = if forces_before(n, specs, n - 1, 0) {
        ConstraintColumn { plus: n - 1, minus: 0, offset: 1.0 }
    } else {
        ConstraintColumn { plus: 0, minus: n - 1, offset: 1.0 }
    };
    let mut columns = vec![symmetry];
    for spec in specs {
        let (i, j) = match *spec {
            ConstraintSpec::Order { i, j } | ConstraintSpec::Distance { i, j, .. } => (i, j),
        };
        for index in [i, j] {
            if index >= n {
                return Err(SeriationError::IndexOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(SeriationError::InvalidParameter(format!("constraint {spec} relates an item to itself")));
        }
        match *spec {
            ConstraintSpec::Order { i, j } => columns.push(ConstraintColumn { plus: i, minus: j, offset: 1.0 }),
            ConstraintSpec::Distance { i, j, a, b } => {
                if !(a <= b) || !a.is_finite() || !b.is_finite() {
                    return Err(SeriationError::InvalidParameter(format!("constraint {spec} has a > b")));
                }
                columns.push(ConstraintColumn { plus: i, minus: j, offset: -b });
                columns.push(ConstraintColumn { plus: j, minus: i, offset: a });
            }
        }
    }
    Ok(ConstraintSet { n, specs: specs.to_vec(), columns })
}

/// Whether the specs chain together into `pos(first) < pos(second)`.
fn forces_before(n: usize, specs: &[ConstraintSpec], first: usize, second: usize) -> bool {
    let mut next = vec![Vec::new(); n];
    for spec in specs {
        match *spec {
            ConstraintSpec::Order { i, j } if i < n && j < n => next[i].push(j),
            ConstraintSpec::Distance { i, j, a, b } if i < n && j < n => {
                if a > 0.0 {
                    next[j].push(i);
                } else if b < 0.0 {
                    next[i].push(j);
                }
            }
            _ => {}
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![first];
    seen[first] = true;
    while let Some(u) = stack.pop() {
        for &v in &next[u] {
            if v == second {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// Parses constraint lines `ord i j` and `dist i j a b` (1-based items,
/// `#` starts a comment).
pub fn parse_constraints(text: &str) -> Result<Vec<ConstraintSpec>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| SeriationError::Parse { line: lineno + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let item = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(err(format!("bad item index {s:?}"))),
            }
        };
        let real = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| err(format!("bad number {s:?}"))) };
        match fields.as_slice() {
            ["ord", i, j] => out.push(ConstraintSpec::Order { i: item(i)?, j: item(j)? }),
            ["dist", i, j, a, b] => {
                out.push(ConstraintSpec::Distance { i: item(i)?, j: item(j)?, a: real(a)?, b: real(b)? })
            }
            _ => return Err(err(format!("expected `ord i j` or `dist i j a b`, got {line:?}"))),
        }
    }
    Ok(out)
}

pub fn read_constraints(path: impl AsRef<Path>) -> Result<Vec<ConstraintSpec>> {
    parse_constraints(&std::fs::read_to_string(path)?)
}

/// Renders specs in the format read by [`parse_constraints`].
pub fn format_constraints(specs: &[ConstraintSpec]) -> String {
    specs.iter().map(|s| format!("{s}\n")).collect()
}
