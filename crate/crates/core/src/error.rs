use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("{op}: incompatible shapes {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: vector lengths differ ({left} vs {right})")]
    LengthMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {max_asymmetry:e}")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("vectors {i} and {j} are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    #[error("vector {index} has dimension {actual}, expected {expected}")]
    VectorDimension {
        index: usize,
        expected: usize,
        actual: usize,
    },

    #[error("{count} vectors cannot be completed to a basis of dimension {dim}")]
    TooManyVectors { count: usize, dim: usize },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})"
    )]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error(
        "power iteration for direction {index} did not converge after {iterations} iterations \
         (residual {residual:e}); the eigenvalue gap is too small, use the Jacobi route instead"
    )]
    PowerIterationStalled {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error(
        "direction {index} is not identifiable: eigenvalue gap {gap:e} is below tolerance; \
         use the Jacobi route instead"
    )]
    NoSpectralGap { index: usize, gap: f64 },

    #[error("requested {requested} components but only {available} are available")]
    TooManyComponents { requested: usize, available: usize },

    #[error("vector of length {0} is too short; at least 2 samples are required")]
    TooFewSamples(usize),

    #[error("measurement row {row} is not centered (mean {mean:e})")]
    NotCentered { row: usize, mean: f64 },

    #[error("dataset has zero total variance; there is no direction to rank")]
    ZeroVariance,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("signal-to-noise ratio is undefined for noise variance {0}")]
    UndefinedSnr(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
