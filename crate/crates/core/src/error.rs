use std::path::PathBuf;

use crate::types::DocumentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("document {0} not found in ranking")]
    DocumentNotFound(DocumentId),

    #[error("duplicate document {0}")]
    DuplicateDocument(DocumentId),

    #[error("rankings are not over the same document set")]
    InconsistentDocuments,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("list length {k} exceeds number of documents {docs}")]
    ListTooLong { k: usize, docs: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no queries")]
    NoQueries,

    #[error("invalid synthetic dataset spec: {0}")]
    InvalidSpec(String),

    #[error("relevance grade {grade} outside click model range 0..={max}")]
    GradeOutOfRange { grade: u8, max: usize },

    #[error("cannot enumerate {k} clicks (limit {limit})")]
    TooManyClicks { k: usize, limit: usize },

    #[error("instance too large for exact enumeration: {0}")]
    InstanceTooLarge(String),

    #[error("zero-probability document pair")]
    ZeroProbabilityPair,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
