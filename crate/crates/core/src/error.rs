use thiserror::Error;

/// Errors raised by the boundary-triplet library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e}, allowed {allowed:.3e})")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("matrix is neither Hermitian nor skew-Hermitian")]
    NeitherHermitianNorSkew,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("interval mismatch between polynomial operands")]
    IntervalMismatch,

    #[error("operator has order zero; there are no boundary terms")]
    OrderZero,

    #[error("structural assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("skew parity J_k = (-1)^(k+1) J_k^H violated (defect {0:.3e})")]
    ParityViolated(f64),

    #[error("symbol determinant vanishes identically; kernel is infinite-dimensional")]
    DegeneratePencil,

    #[error("boundary matrix A is singular; trace-form conversion needs a full-rank triplet")]
    SingularA,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
