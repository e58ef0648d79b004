use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("segment [{lo}, {hi}) exceeds the configured segment size {max}")]
    SegmentTooLarge { lo: u64, hi: u64, max: u64 },

    #[error("range underflow: lower bound {0} is below 2")]
    RangeUnderflow(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A check that can only fail if the implementation itself is wrong.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overflow(_) => "overflow",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::SegmentTooLarge { .. } => "segment-too-large",
            Error::RangeUnderflow(_) => "range-underflow",
            Error::Precondition(_) => "precondition",
            Error::Inconsistency(_) => "inconsistency",
            Error::Checkpoint { .. } => "checkpoint",
            Error::Io(_) => "io",
        }
    }
}
