use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("limit {limit} exceeds the configured ceiling {ceiling}")]
    ResourceLimit { limit: u128, ceiling: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}
