use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid version bound '{bound}' for {package}: {message}")]
    InvalidBound {
        package: String,
        bound: String,
        message: String,
    },

    #[error("cannot resolve {package}: {reason} (bounds: {})", bounds.join("; "))]
    UnresolvableDependency {
        package: String,
        bounds: Vec<String>,
        reason: String,
    },

    #[error("no registry given and MATHREPRO_REGISTRY is not set")]
    NoRegistry,
}

pub type Result<T, E = EnvError> = std::result::Result<T, E>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> EnvError {
    let path = path.into();
    move |source| EnvError::Io { path, source }
}
