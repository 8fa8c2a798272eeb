use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Operands do not share the same parent instance.
    #[error("parent mismatch: operands belong to different {0}")]
    ParentMismatch(&'static str),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("invalid identifier '{0}'")]
    InvalidIdentifier(String),
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;
