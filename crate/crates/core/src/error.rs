use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable,
/// module-qualified code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported character value: {0}")]
    UnsupportedCharacterValue(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cone is empty: every column has zero free part")]
    EmptyCone,
    #[error("cone is not full dimensional (rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("character lattice does not match ker(A)")]
    LatticeMismatch,
    #[error("partial character is not saturated")]
    NotSaturated,
    #[error("ideal is not A-graded")]
    NotGraded,
    #[error("degree slice too small: primitive elements need h-degree {needed}, slice bound is {bound}")]
    SliceTooSmall { needed: i64, bound: i64 },
    #[error("Groebner pair budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "input.DIMENSION_MISMATCH",
            Error::Malformed(_) => "input.MALFORMED",
            Error::UnsupportedCharacterValue(_) => "input.UNSUPPORTED_CHARACTER_VALUE",
            Error::Unsupported(_) => "input.UNSUPPORTED",
            Error::EmptyCone => "polyhedral.EMPTY_CONE",
            Error::NotFullDimensional { .. } => "polyhedral.NOT_FULL_DIMENSIONAL",
            Error::NotPointed => "polyhedral.NOT_POINTED",
            Error::LatticeMismatch => "binomial_ideals.LATTICE_MISMATCH",
            Error::NotSaturated => "binomial_ideals.NOT_SATURATED",
            Error::NotGraded => "binomial_ideals.NOT_GRADED",
            Error::SliceTooSmall { .. } => "hypergeometric_systems.SLICE_TOO_SMALL",
            Error::BudgetExceeded { .. } => "exact_algebra.BUDGET_EXCEEDED",
            Error::Hypotheses(_) => "group_lattice.HYPOTHESES_FAILED",
            Error::Consistency(_) => "internal.CONSISTENCY",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
