use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime (or exceeds 2^31)")]
    NotPrime(u64),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("operation requires degree >= {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("enumeration budget exceeded for {what}: need {needed}, budget {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("distribution weights sum to {0}, expected 1")]
    NotNormalized(String),

    #[error("mismatched prime context: {0}")]
    ContextMismatch(String),

    #[error("not a divisor")]
    NotDivisible,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
