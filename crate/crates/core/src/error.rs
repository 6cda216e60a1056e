use thiserror::Error;

/// Errors produced by dataset construction, training, and the experiment
/// harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus produced no features")]
    NoFeatures,

    #[error("empty dataset")]
    EmptyDataset,

    #[error("training size {requested} out of range (dataset has {available} examples)")]
    SplitOutOfRange { requested: usize, available: usize },

    #[error("k = {k} exceeds number of stored examples ({available})")]
    BadNeighborCount { k: usize, available: usize },

    #[error("no positive examples to cover")]
    NoPositives,

    #[error("rule learning made no progress on sense {sense}")]
    CoverStalled { sense: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("paired samples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid concept spec: {0}")]
    BadConceptSpec(String),

    #[error("invalid experiment config: {0}")]
    BadConfig(String),

    #[error("missing trial records for {classifier} at size {size}")]
    MissingCell { classifier: String, size: usize },

    #[error("malformed {what} at line {line}: {detail}")]
    Parse {
        what: &'static str,
        line: usize,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
