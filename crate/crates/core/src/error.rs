use std::io;

use thiserror::Error;

/// Errors raised by the seriation library.
#[derive(Debug, Error)]
pub enum SeriationError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix has a negative or non-finite entry at ({row}, {col})")]
    InvalidEntry { row: usize, col: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("vector is not unimodal (argmax set is not an interval near index {index})")]
    NonUnimodal { index: usize },

    #[error("similarity graph is disconnected (Fiedler value {fiedler_value:e})")]
    DisconnectedGraph { fiedler_value: f64 },

    #[error("iterative eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("constraint matrix has a zero column at {column}")]
    RankDeficientD { column: usize },

    #[error("projection stopped after {sweeps} sweeps with gap {gap:e} and infeasibility {infeasibility:e}")]
    GapNotReached { sweeps: usize, gap: f64, infeasibility: f64 },

    #[error("constraint set is infeasible: {0}")]
    LikelyInfeasible(String),

    #[error("mu = {mu:e} exceeds the convexity bound {bound:e}")]
    InfeasibleMu { mu: f64, bound: f64 },

    #[error("Sinkhorn scaling did not converge after {iterations} sweeps (deviation {deviation:e})")]
    NoConvergence { iterations: usize, deviation: f64 },

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SeriationError> = std::result::Result<T, E>;
