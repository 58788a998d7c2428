use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("set {{{set}}} is not contained in [{v}]")]
    OutsideUniverse { set: String, v: u32 },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("universe size {v} exceeds the enumeration cap {cap}")]
    UniverseTooLarge { v: u32, cap: u32 },
    #[error("invalid chain decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix too large for the minors oracle ({rows}x{cols}, cap {cap})")]
    OracleTooLarge {
        rows: usize,
        cols: usize,
        cap: usize,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
