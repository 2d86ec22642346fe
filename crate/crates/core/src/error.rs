//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A construction self-check failed; signals a bug, not user error.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("representation and grading belong to different algebras")]
    AlgebraMismatch,

    #[error("matrix powers did not vanish by the dimension bound; element is not nilpotent")]
    NotNilpotent,

    #[error("torus parameters must be nonzero")]
    ZeroParameter,

    #[error("invalid generator word: {0}")]
    InvalidWord(String),

    /// A highest matrix element ⟨i|G|i⟩ vanished; the sample must be rejected.
    #[error("singular denominator: a highest matrix element vanished")]
    SingularDenominator,

    #[error("unknown coefficient `{0}` for this system")]
    UnknownCoefficient(String),

    #[error("coefficient `{0}` is missing from the configuration")]
    MissingCoefficient(String),

    #[error("exact mode requires constant coefficient functions")]
    NonConstantCoefficients,

    #[error("exact mode requires vanishing grade-zero parts")]
    NonzeroGradeZero,

    #[error("the u-matrix is singular at the sampled point")]
    SingularU,

    #[error("det(u) is not positive at the sampled point")]
    NegativeDeterminant,

    #[error("gauge matrix is singular")]
    SingularGauge,

    #[error("built operator violates its grade decomposition: {0}")]
    GradeViolation(String),

    #[error("ambiguous convention `{0}`: the residual oracle did not single out one variant")]
    UnresolvedConvention(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
