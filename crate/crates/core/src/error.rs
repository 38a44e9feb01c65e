use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: |A - A^dagger| = {deviation:e} at entry ({row}, {col})")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A structural invariant (projector, completeness, trace, positivity) does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
