use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sequence prefix is empty")]
    EmptyPrefix,

    #[error("prefix of length {len} is too short: {needed} terms required")]
    PrefixTooShort { len: usize, needed: usize },

    #[error("matrix corner {rows}x{cols} is too small: {reason}")]
    MatrixTooSmall {
        rows: usize,
        cols: usize,
        reason: String,
    },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("window {window} out of range: must satisfy 2 <= window <= {max}")]
    WindowOutOfRange { window: usize, max: usize },

    #[error("subset search over {requested} columns exceeds the cap of {cap}")]
    SubsetBoundExceeded { requested: usize, cap: usize },

    #[error("matrix parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unknown sequence name `{0}`")]
    UnknownSequence(String),

    #[error("unknown space `{0}`")]
    UnknownSpace(String),

    #[error("unsupported pair ({source_space}, {target})")]
    UnsupportedPair {
        source_space: String,
        target: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
