use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}: no triples")]
    EmptyGraph(String),

    /// Invalid configuration; `key` names the offending setting.
    #[error("invalid value for `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unknown {kind} `{label}`")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("{kind} id {id} out of range (size {size})")]
    IdOutOfRange {
        kind: &'static str,
        id: usize,
        size: usize,
    },

    #[error("relation label `{0}` is reserved")]
    ReservedRelation(String),

    #[error("cannot corrupt triples with fewer than 2 entities (got {0})")]
    CannotCorrupt(usize),

    #[error("no tokens in text `{0}`")]
    EmptyText(String),

    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("inconsistent input: {0}")]
    Consistency(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether this error is the caller's fault (bad flags or settings)
    /// rather than a failure while doing the work.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}
