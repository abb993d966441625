use thiserror::Error;

use crate::field::FieldSpec;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is invertible")]
    NotSingular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("nonzero nilpotent 2x2 matrices are not a product of two nilpotent matrices")]
    ExceptionalCase,
    #[error("invalid block size k = {0}")]
    InvalidK(usize),
    #[error("unsupported size {0}")]
    UnsupportedSize(usize),
    #[error("matrix is square-zero")]
    SquareZero,
    #[error("matrix is scalar")]
    ScalarMatrix,
    #[error("matrix is a nonzero multiple of an idempotent")]
    ScaledIdempotent,
    #[error("constructed basis is linearly dependent")]
    DependentSystem,
    #[error("no LU-similarity found")]
    SearchExhausted,
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
