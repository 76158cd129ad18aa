use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed PGM: {0}")]
    Format(String),

    #[error("truncated PGM raster: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("unsupported PGM: {0}")]
    Unsupported(String),

    #[error("non-finite value in {0}")]
    Numeric(&'static str),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("undefined: {0}")]
    Undefined(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
