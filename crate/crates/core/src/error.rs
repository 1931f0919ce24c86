use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alist parse error at line {line}: {message}")]
    AlistParse { line: usize, message: String },

    #[error("alist inconsistency: {0}")]
    AlistInconsistent(String),

    #[error("index ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid profile parameters: {0}")]
    InvalidProfile(String),

    #[error("k-SR column (k={k}, j={j}) is out of range for this profile")]
    ColumnOutOfRange { k: usize, j: usize },

    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),

    #[error("infeasible degree assignment: {0}")]
    InfeasibleDistribution(String),

    #[error(
        "cannot place edge {edge} of column {column} without a cycle shorter than {girth_floor}"
    )]
    PegInfeasible {
        column: usize,
        edge: usize,
        girth_floor: usize,
    },

    #[error("matrix is not lower triangular with unit diagonal: {0}")]
    NotTriangular(String),

    #[error("operation requires the full regime (nv2 = M - 1)")]
    RegimeMismatch,

    #[error("matrix is singular; rows {witness:?} sum to zero on the unresolved columns")]
    Singular { witness: Vec<usize> },

    #[error("erasure encoding left {unresolved} parity bits unresolved")]
    EncodingIncomplete { unresolved: usize },

    #[error("contradictory check {check}: known neighbours have odd parity")]
    Contradiction { check: usize },

    #[error("rate {rate} is outside [{min}, {max}]")]
    RateOutOfRange { rate: f64, min: f64, max: f64 },

    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error in {what} at line {line}: {message}")]
    Parse {
        what: &'static str,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
