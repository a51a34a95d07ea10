use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: invalid UTF-8")]
    Decode { path: PathBuf, line: usize },

    #[error("parallel corpus is misaligned: source has {source_lines} lines, target has {target_lines}")]
    Alignment { source_lines: usize, target_lines: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid sentence: {0}")]
    InvalidSentence(String),

    #[error("requested {requested} items but only {available} are available")]
    Size { requested: usize, available: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("{what}: lengths differ ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("malformed escape at byte {offset}: {message}")]
    MalformedEscape { offset: usize, message: String },

    #[error("shape mismatch: expected {expected} rows, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid merge table: {0}")]
    InvalidMergeTable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
