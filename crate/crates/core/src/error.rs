use thiserror::Error;

/// Errors raised by the discord toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscordError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix has {found} entries, expected {expected} for a square matrix")]
    Shape { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("trace deviates from 1 by {deviation:.3e} (trace = {trace:.12})")]
    Trace { trace: f64, deviation: f64 },

    #[error("negative eigenvalue {value:.3e} below the PSD floor")]
    NegativeEigenvalue { value: f64 },

    #[error("operation needs a bipartite split (m, n) but the state has none")]
    MissingSplit,

    #[error("split ({m}, {n}) does not factor dimension {dim}")]
    BadSplit { m: usize, n: usize, dim: usize },

    #[error("invalid probabilities: {0}")]
    InvalidProbability(String),

    #[error("invalid measurement basis: {0}")]
    InvalidBasis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search over {m}x{n} exceeds the cost guard (max factor dimension {limit})")]
    CostGuard { m: usize, n: usize, limit: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, DiscordError>;
