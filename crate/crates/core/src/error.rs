use thiserror::Error;

/// Errors raised by the geometry toolkit and its harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix data of length {len} is not square")]
    NotSquare { len: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid split {m}x{n}")]
    InvalidSplit { m: usize, n: usize },

    #[error("no PSD state found on the shell of radius {radius} after {rejects} rejections")]
    ShellUnreachable { radius: f64, rejects: usize },

    #[error("dimension {0} is not supported by this bound")]
    UnsupportedDim(usize),

    #[error("invalid eigenvalue pair (min {lambda_min}, max {lambda_max})")]
    InvalidEigenvalues { lambda_min: f64, lambda_max: f64 },

    #[error("negative zero multiplicity {0} in partial-transpose spectrum")]
    MultiplicityNegative(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
