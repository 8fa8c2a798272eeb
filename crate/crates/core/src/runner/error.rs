use thiserror::Error;

use crate::kernel::KernelError;

/// Interpreter failures. Each renders as one line.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("undefined variable '{0}'")]
    UndefinedVariable(String),

    #[error("{name} expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: String,
        found: usize,
    },

    #[error("{0}")]
    Type(String),

    #[error("{0}")]
    Kernel(#[from] KernelError),

    /// Saving or loading failed; `path` is as the user wrote it.
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

pub type Result<T, E = EvalError> = std::result::Result<T, E>;
