//! Error types shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// Variants are grouped by contract: caller mistakes (`ShapeMismatch`,
/// `InvalidParameter`, `DegenerateInput`, `EnumerationGuard`,
/// `NormBoundViolated`, `NonMonotoneSigma`), malformed serialized data
/// (`Parse`), and failures that can occur at runtime even with valid inputs
/// (`ConstructionFailure`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two matrices that must share a shape do not.
    #[error("shape mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    /// A scalar argument is outside its admissible range.
    #[error("parameter `{name}` = {value} out of range: requires {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// Input too small or otherwise structurally unusable for the operation.
    #[error("degenerate input: {context}")]
    DegenerateInput { context: String },

    /// A column that must be nonzero has zero norm.
    #[error("column {col} has zero norm")]
    SingularColumn { col: usize },

    /// A vector that must be nonzero has zero norm.
    #[error("zero vector passed where a direction is required")]
    ZeroVector,

    /// Sparse vector constructor arguments violate an invariant.
    #[error("invalid sparse vector: {reason}")]
    InvalidSparseVector { reason: String },

    /// Exhaustive enumeration would be too large to run.
    #[error(
        "instance too large to enumerate: m = {m}, k = {k} (guard: m <= {max_m}, k <= {max_k})"
    )]
    EnumerationGuard {
        m: usize,
        k: usize,
        max_m: usize,
        max_k: usize,
    },

    /// A randomized construction did not certify after its retry budget.
    #[error(
        "construction failed after {attempts} attempts: best achieved coherence {achieved_mu} \
         (target < {target_mu})"
    )]
    ConstructionFailure {
        attempts: usize,
        achieved_mu: f64,
        target_mu: f64,
    },

    /// Column norms exceed the declared bound.
    #[error("norm bound {gamma} violated by columns {offenders:?}")]
    NormBoundViolated { gamma: f64, offenders: Vec<usize> },

    /// The caller-supplied activation failed the strict-monotonicity spot check.
    #[error(
        "activation is not strictly increasing on the sampled range: \
         sigma({x0}) = {y0} vs sigma({x1}) = {y1}"
    )]
    NonMonotoneSigma { x0: f64, x1: f64, y0: f64, y1: f64 },

    /// Serialized matrix text could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
