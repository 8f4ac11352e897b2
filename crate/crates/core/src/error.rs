use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KummerError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported degree d={0}: graphs require d=4")]
    UnsupportedDegree(u32),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid hypothesis: {0}")]
    InvalidHypothesis(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, KummerError>;
