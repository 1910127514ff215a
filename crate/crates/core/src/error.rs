use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials belong to different ring contexts")]
    ContextMismatch,
    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("field characteristic {0} is not an odd prime")]
    InvalidField(u32),
    #[error("division by zero in coefficient field")]
    DivisionByZero,
    #[error("free module elements of rank {expected} expected, got rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("minor size {size} out of range 1..={max}")]
    InvalidMinorSize { size: usize, max: usize },
    #[error("singular-locus index {alpha} out of range {min}..={max}")]
    InvalidAlpha { alpha: usize, min: usize, max: usize },
    #[error("input is not a germ: {0}")]
    InvalidGerm(String),
    #[error("input does not define an isolated complete intersection singularity")]
    NotIcis,
    #[error("ideal is not primary to the maximal ideal; the quotient has infinite length")]
    InfiniteLength,
    #[error("finite differences did not stabilize up to t = {max_t}")]
    NoStabilization { max_t: usize },
    #[error("every generic draw produced a quotient of infinite length")]
    DegenerateDraws,
    #[error("no generic linear recombination found after {attempts} attempts")]
    GenericityFailure { attempts: usize },
    #[error("standard basis computation exceeded the step budget of {budget} reductions")]
    StepBudgetExceeded { budget: u64 },
    #[error("jet of level {found} given where level {expected} is required")]
    LevelMismatch { expected: u32, found: u32 },
    #[error("invalid class parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Errors caused by a configurable resource cap rather than by the input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::NoStabilization { .. } | Error::StepBudgetExceeded { .. })
    }
}
