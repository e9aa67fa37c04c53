use std::path::PathBuf;

use thiserror::Error;

/// Failures of the dense linear algebra kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },
    #[error("triangular matrix is singular at diagonal index {index}")]
    SingularTriangular { index: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
}

/// Errors raised while building models, fitting them or computing diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("insufficient data: {n} observations for {k} columns (need n > k)")]
    InsufficientData { n: usize, k: usize },
    #[error("model has no regressors besides the intercept")]
    NoRegressors,
    #[error("column `{name}` is flagged as intercept but is not constant")]
    InvalidIntercept { index: usize, name: String },
    #[error("exact collinearity: column `{name}` is a linear combination of other columns")]
    ExactCollinearity { index: usize, name: String },
    #[error("perfect fit: residual sum of squares is numerically zero")]
    PerfectFit,
    #[error("column index {index} out of range for {k} columns")]
    ColumnOutOfRange { index: usize, k: usize },
    #[error("{0}")]
    InvalidInput(String),
    #[error("column `{name}`: TVIF routes disagree ({normal_equations:e} vs {inverse_ssr:e})")]
    IllConditioned {
        index: usize,
        name: String,
        normal_equations: f64,
        inverse_ssr: f64,
    },

    #[error("VIF is undefined for the intercept column {index}")]
    UndefinedForIntercept { index: usize },
    #[error("t statistic of column {index} is zero")]
    ZeroTStatistic { index: usize },
    #[error("orthonormal coefficient of column {index} is numerically zero")]
    ZeroOrthonormalCoefficient { index: usize },
    #[error("probability must lie strictly between 0 and 1 (got {0})")]
    InvalidProbability(f64),

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: u64,
        column: usize,
        message: String,
    },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("non-numeric cell at line {line}, column {column}: `{value}`")]
    NonNumericCell {
        line: u64,
        column: usize,
        value: String,
    },
    #[error("too few rows: got {rows} data rows, need at least {needed}")]
    TooFewRows { rows: usize, needed: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
