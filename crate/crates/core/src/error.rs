use thiserror::Error;

/// Errors raised by the algebra kernel and the verification pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("polynomial is not homogeneous")]
    Inhomogeneous,

    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not anti-symmetric (entry ({row}, {col}))")]
    NotAntiSymmetric { row: usize, col: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("generator index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),

    #[error("delta(r) is nonzero")]
    DeltaRNonzero,

    #[error("relations r, r_1, .., r_n are linearly dependent (rank {rank}, expected {expected})")]
    DependentRelations { rank: usize, expected: usize },

    #[error("degree {degree} exceeds the completion bound {bound}")]
    DegreeExceedsBound { degree: usize, bound: usize },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
