use thiserror::Error;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different exponential contexts")]
    ContextMismatch,

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("identity violated: {identity} (nonzero coefficient at {monomial})")]
    IdentityViolation { identity: String, monomial: String },

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("element is not in the module: {0}")]
    NotInModule(String),

    #[error("operator order {order} too high for target grade {grade}")]
    OrderTooHigh { order: usize, grade: usize },

    #[error("operator size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("meromorphic function belongs to a different variety")]
    VarietyMismatch,

    #[error("function is not admissible: {0}")]
    NotAdmissible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
