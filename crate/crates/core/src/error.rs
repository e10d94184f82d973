use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("column `{column}`: {source}")]
    Column {
        column: String,
        #[source]
        source: Box<Error>,
    },

    #[error("duplicate column name `{0}`")]
    DuplicateName(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn in_column(self, name: &str) -> Self {
        Error::Column {
            column: name.to_string(),
            source: Box::new(self),
        }
    }
}
