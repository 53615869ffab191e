use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("ring parameter mismatch: N = {0} vs N = {1}")]
    RingMismatch(u32, u32),
    #[error("m = {m} does not divide ring parameter N = {n}")]
    RingParameter { n: u32, m: u32 },
    #[error("parabolic subset is not finitary")]
    NotFinitary,
    #[error("element is not a minimal coset representative")]
    NotMinRep,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("braid move for m = {0} is not supported")]
    UnsupportedBraid(u32),
    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
