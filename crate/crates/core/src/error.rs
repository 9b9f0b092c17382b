use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by dataset handling, ranking and measurement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent N: algorithm `{name}` has {got} measurements, expected {expected}")]
    InconsistentN { name: String, got: usize, expected: usize },

    #[error("invalid measurement for `{name}` at run {run}: {value} (must be finite and > 0)")]
    InvalidMeasurement { name: String, run: usize, value: f64 },

    #[error("duplicate algorithm `{0}`")]
    DuplicateAlgorithm(String),

    #[error("invalid algorithm name: names must be non-empty")]
    EmptyName,

    #[error("dataset contains no algorithms")]
    EmptyDataset,

    #[error("algorithm `{0}` has no measurements")]
    NoMeasurements(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("empty plan: need at least one algorithm and one repetition")]
    EmptyPlan,

    #[error("K exceeds N: sample size {k} is larger than {n} available measurements")]
    KExceedsN { k: usize, n: usize },

    #[error("oracle too large: {pairs} subset pairs exceed the enumeration budget of {budget}")]
    OracleTooLarge { pairs: u128, budget: u128 },

    #[error("undefined recall: reference set is empty")]
    UndefinedRecall,

    #[error("truncation size {n} out of range 1..={max}")]
    NOutOfRange { n: usize, max: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid distribution spec `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },

    #[error("malformed input in {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("failed to start `{name}`: {source}")]
    Spawn {
        name: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    CommandFailed(Box<crate::harness::RunFailure>),

    #[error("cannot access {}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn file(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::File {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
