use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("uniformity mismatch: host is {host}-uniform but pattern is {pattern}-uniform")]
    UniformityMismatch { host: usize, pattern: usize },

    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("matroid is not weakly saturated: {0}")]
    Unverified(String),

    #[error("self-verification failed: {0}")]
    SelfVerification(String),

    #[error("percolation failed: {0}")]
    Percolation(String),

    #[error("sampled vectors degenerate after {0} attempts")]
    Degenerate(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
