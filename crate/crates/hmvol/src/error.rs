use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ideal is not principal: {0}")]
    NotPrincipal(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("search cap reached: {0}")]
    Cap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
