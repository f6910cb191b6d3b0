use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("element does not belong to model {model}: {detail}")]
    ModelMismatch { model: String, detail: String },

    #[error("generator index {index} out of range (generating set has {len} generators)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("generating set does not generate the full group of {0}")]
    NotGenerating(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("target is unreachable from source under the given generating set")]
    Unreachable,

    #[error("permutation is not in the normaliser of the generating set")]
    NotInNormaliser,

    #[error("distance cache rejected: {0}")]
    Cache(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
