//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("no actions remain after degenerate-action filtering")]
    NoActionsRemain,

    #[error("need at least {needed} users, corpus has {actual}")]
    TooFewUsers { needed: usize, actual: usize },

    #[error("unknown action {0:?}")]
    UnknownAction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scores contain a single class; AUC needs both labels")]
    SingleClass,

    #[error("difficulty maps share no actions")]
    EmptyIntersection,

    #[error("empty histogram")]
    EmptyHistogram,

    #[error("training diverged at step {step}: loss is not finite")]
    Diverged { step: usize },

    #[error("bad model file: {0}")]
    BadModel(String),

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Tag an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
