use thiserror::Error;

pub type Result<T, E = HallError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("unsupported field order q = {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u32),

    #[error("enumeration too large: {what} needs {size} candidates, budget is {budget}")]
    BudgetExceeded { what: String, size: u128, budget: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quiver is not acyclic")]
    CyclicQuiver,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("unknown fixture '{0}' (known: a1, a2, kronecker)")]
    UnknownFixture(String),

    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("not projective components: {0}")]
    NotProjective(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("diamond product is defined on K-free elements only")]
    NotKFree,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl HallError {
    pub fn budget(what: impl Into<String>, size: u128, budget: u64) -> Self {
        HallError::BudgetExceeded { what: what.into(), size, budget }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, HallError::BudgetExceeded { .. })
    }
}
