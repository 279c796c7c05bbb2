use std::path::PathBuf;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A series or image is too short/long for the requested operation.
    #[error("length error: {0}")]
    Length(String),

    /// An argument is out of its documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Tensor or model shapes do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// A file or stream does not match its expected format.
    #[error("format error: {0}")]
    Format(String),

    /// Training or inference produced non-finite numbers.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Underlying I/O failure, annotated with the path involved.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
