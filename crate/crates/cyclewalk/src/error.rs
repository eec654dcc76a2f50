use thiserror::Error;

/// Errors produced by parameter validation and numerical routines.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("cycle length must be at least 2, got {0}")]
    CycleTooShort(usize),

    #[error("decoherence rate must lie in [0, 1], got {0}")]
    RateOutOfRange(f64),

    #[error("coin angle must lie strictly inside (0, pi/2), got {0}")]
    CoinAngleOutOfRange(f64),

    #[error("initial coin state must have unit norm, got {0}")]
    CoinNotNormalized(f64),

    #[error("momentum index {index} out of range for a cycle of {n_sites} sites")]
    MomentumOutOfRange { index: usize, n_sites: usize },

    #[error("expected a square matrix of dimension {expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not Hermitian, max entry deviation {0:e}")]
    NotHermitian(f64),

    #[error("matrix trace deviates from 1 by {0:e}")]
    NotUnitTrace(f64),

    #[error("matrix has eigenvalue {0:e} below the positivity tolerance")]
    NotPositiveSemidefinite(f64),

    #[error("momentum pair ({k}, {k_prime}) violates precondition: {requirement}")]
    BlockPrecondition {
        k: usize,
        k_prime: usize,
        requirement: &'static str,
    },

    #[error("time parity must be 0 or 1, got {0}")]
    InvalidParity(usize),

    #[error("eigenvalue computation failed to converge")]
    EigenFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
