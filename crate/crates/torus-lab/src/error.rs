use thiserror::Error;

/// Errors surfaced by the torus laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry: {0}")]
    Geometry(String),

    #[error("band: {0}")]
    Band(String),

    /// A frequency falls outside the range the sampling grid can represent
    /// without aliasing.
    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("set: {0}")]
    Set(String),

    /// A stated hypothesis of an inequality is violated; no verdict is
    /// produced for such instances.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
