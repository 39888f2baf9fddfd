use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("composition domain mismatch: {0}")]
    CompositionDomain(String),
    #[error("region is not open: {0}")]
    NotOpen(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("inconsistent gluing data: {0}")]
    Inconsistent(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
