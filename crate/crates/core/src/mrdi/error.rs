use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum MrdiError {
    #[error("type '{0}' is not registered for serialization")]
    UnregisteredType(String),
    #[error("unknown namespace '{0}'")]
    UnknownNamespace(String),
    #[error("unknown type '{0}'")]
    UnknownType(String),
    /// `path` is a JSON pointer to the offending node.
    #[error("malformed payload at '{path}': {message}")]
    MalformedPayload { path: String, message: String },
    #[error("format version {found} is newer than supported version {current}")]
    VersionTooNew { found: u64, current: u64 },
    #[error("format version {found} is older than {current}; upgrade the document first")]
    OutdatedFormat { found: u64, current: u64 },
    #[error("no upgrade path from version {from} to {to}: missing script {missing} -> {}", missing + 1)]
    MissingUpgradePath { from: u64, to: u64, missing: u64 },
    #[error("upgrade to version {version} produced an invalid document: {reason}")]
    InvalidUpgrade { version: u64, reason: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MrdiError {
    pub(crate) fn malformed(path: impl Into<String>, message: impl Into<String>) -> MrdiError {
        MrdiError::MalformedPayload {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = MrdiError> = std::result::Result<T, E>;
