//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Dimension must be a positive integer.
    #[error("degenerate dimension n = {0}; n >= 1 required")]
    DegenerateDimension(i64),

    /// A weight breaks the parity constraint w == n (mod 2).
    #[error("weight {w} has wrong parity for dimension n = {n}")]
    Parity { n: i64, w: i64 },

    /// A weight lies outside [-n, n].
    #[error("weight {w} out of range for dimension n = {n}")]
    WeightRange { n: i64, w: i64 },

    /// Probability masses must be nonnegative and sum to exactly 1.
    #[error("masses {0}")]
    InvalidMasses(String),

    /// rho must be a rational in [0, 1].
    #[error("noise parameter rho = {0} outside [0, 1]")]
    RhoRange(String),

    /// Parity size outside 0..=n.
    #[error("parity size {ell} out of range for n = {n}")]
    ParitySize { n: i64, ell: i64 },

    /// Operands live on different dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(i64, i64),

    /// The input distribution is not k-uniform but the operation requires it.
    #[error("input is not {0}-uniform")]
    NotKUniform(i64),

    /// Malformed linear program (row lengths, empty variable set, ...).
    #[error("invalid linear program: {0}")]
    InvalidProgram(String),

    /// Bad scalar parameter for an analytic formula or scenario.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Parse failure for serialized records.
    #[error("parse error: {0}")]
    Parse(String),
}
