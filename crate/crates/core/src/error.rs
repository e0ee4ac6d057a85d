use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("no primitive 2^{t}-th root of unity in the ambient field (max exponent {max})")]
    RootUnavailable { t: u32, max: u32 },

    #[error("norm is undefined for a field equal to its ambient (identity involution)")]
    NormOnIdentity,

    #[error("power-test exponent 2^{exponent} exceeds the cap 2^{cap}")]
    PowerCapExceeded { exponent: u32, cap: u32 },

    #[error("the defining constant must be nonzero")]
    ZeroConstant,

    #[error("element {0} does not lie in the fixed field K")]
    NotInFixedField(String),

    #[error("n = {n} out of range (0..={max})")]
    DegreeOutOfRange { n: u32, max: u32 },

    #[error("degree {0} is not a power of two")]
    NotPowerOfTwo(u32),

    #[error("algebra spec mismatch")]
    SpecMismatch,

    #[error("element is not a nonzero idempotent")]
    NotIdempotent,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration of {size} elements exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("operation requires a finite field, got {0}")]
    NotFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),

    /// A kernel invariant broke. Never a user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
