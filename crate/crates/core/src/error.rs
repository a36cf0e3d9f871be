use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid mixture weights: {0}")]
    Weight(String),
    #[error("box is signaling")]
    Signaling,
    #[error("value out of range: {0}")]
    Range(String),
    #[error("F_PR = 1 but the box matches no PR box")]
    Degenerate,
    #[error("invalid family parameters: {0}")]
    Param(String),
    #[error("family point does not regenerate the box")]
    ContextMismatch,
    #[error("not a valid box: {0}")]
    InvalidBox(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
