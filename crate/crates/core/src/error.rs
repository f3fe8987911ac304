use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace {trace} is outside the allowed window (tolerance {tolerance:.3e})")]
    TraceMismatch { trace: f64, tolerance: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error(
        "support of the first argument leaks {leaked:.3e} outside the support of the second; relative entropy is +inf"
    )]
    SupportViolation { leaked: f64 },

    #[error("operator is rank deficient (minimum eigenvalue {min_eigenvalue:.3e}) where a full-rank one is required")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("ratio undefined: denominator {denominator:.3e} is below the floor")]
    UndefinedRatio { denominator: f64 },

    #[error("lemma precondition failed: {0}")]
    Precondition(String),
}
