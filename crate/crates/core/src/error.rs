use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("I/O error on {path}: {source}")]
    IoPath {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("format error at line {line}: {message}")]
    FormatAt { line: usize, message: String },

    #[error("value {value} at line {line} outside [{min}, {max}]")]
    Range {
        line: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no token reaches the minimum count of {min_count}")]
    EmptyVocabulary { min_count: usize },

    #[error("non-finite value encountered ({0}); lower the learning rate")]
    NonFiniteValue(&'static str),

    #[error("no token of the sentence can be represented by the model")]
    NoRepresentableToken,

    #[error("operation not supported by a {0} model")]
    UnsupportedModel(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("missing feature '{feature}' for pair '{pair_id}'")]
    MissingFeature { feature: String, pair_id: String },

    #[error("design matrix is rank deficient (collinear or constant features)")]
    RankDeficient,

    #[error("insufficient data: {rows} rows for {params} parameters")]
    InsufficientData { rows: usize, params: usize },

    #[error("constant input has no defined correlation")]
    ConstantInput,

    #[error("pair '{pair_id}': {source}")]
    Pair {
        pair_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io_path(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::IoPath {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn for_pair(self, pair_id: &str) -> Self {
        Error::Pair {
            pair_id: pair_id.to_string(),
            source: Box::new(self),
        }
    }
}
