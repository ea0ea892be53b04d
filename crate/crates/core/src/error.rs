use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("validation failed for {label}: {msg}")]
    Validation { label: String, msg: String },

    #[error("{what} of size {size} exceeds the configured maximum {cap}")]
    Size { what: &'static str, size: u128, cap: u128 },

    #[error("{what}: enumeration cap {cap} exceeded")]
    Cap { what: &'static str, cap: u64 },

    #[error("modules are defined over different rings")]
    RingMismatch,

    #[error("element set is not a submodule: {0}")]
    NotSubmodule(String),

    #[error("ideal must be two-sided, got {0}")]
    Side(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub(crate) fn validation(label: &str, msg: impl Into<String>) -> Self {
        Error::Validation { label: label.to_string(), msg: msg.into() }
    }

    /// True for errors caused by hitting a size or enumeration limit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::Size { .. } | Error::Cap { .. })
    }
}
