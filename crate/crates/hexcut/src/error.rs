use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    Spec(String),
    #[error("spec parse error: {0}")]
    Parse(String),
    #[error("point outside domain: {0}")]
    Domain(String),
    #[error("enumeration cap of {0} tilings exceeded")]
    CapExceeded(usize),
    #[error("singular matrix")]
    Singular,
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
