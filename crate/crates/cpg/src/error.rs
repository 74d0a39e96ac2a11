use thiserror::Error;

/// Errors surfaced by graph construction, frontends, passes and exports.
#[derive(Debug, Error)]
pub enum CpgError {
    #[error("taxonomy error: unknown node kind `{0}`")]
    UnknownKind(String),

    #[error("taxonomy error: {0}")]
    Taxonomy(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("attribute error: {0}")]
    Attribute(String),

    #[error("unsupported language: no frontend registered for `{0}`")]
    UnsupportedLanguage(String),

    #[error("ingestion error at {path}: {message}")]
    Ingestion { path: String, message: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("scope stack underflow: cannot leave the global scope")]
    ScopeUnderflow,

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("query error: {0}")]
    Query(String),

    #[error("analysis deadline exceeded")]
    Timeout,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CpgError>;
