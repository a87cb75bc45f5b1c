use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Remote,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in field `{field}`{}", context_suffix(.context))]
    Parse {
        field: String,
        context: Option<String>,
    },

    #[error("format error: expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("degenerate variance: {0}")]
    Degenerate(String),

    #[error("rank-deficient design matrix: predictor(s) {} are constant, zero or collinear", .predictors.join(", "))]
    RankDeficient { predictors: Vec<String> },

    #[error("too few samples: need at least {required}, got {actual}")]
    SampleCount { required: usize, actual: usize },

    #[error("unsupported model kind `{0}` for this operation")]
    UnsupportedKind(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("connection error ({endpoint}): {message}")]
    Connection { endpoint: String, message: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            context: None,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches context (for instance the block height) to a parse error.
    pub(crate) fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::Parse {
                field,
                context: None,
            } => Error::Parse {
                field,
                context: Some(ctx.into()),
            },
            Error::Parse {
                field,
                context: Some(c),
            } => Error::Parse {
                field,
                context: Some(format!("{}, {c}", ctx.into())),
            },
            other => other,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_) => ErrorClass::Usage,
            Error::Connection { .. } | Error::Range(_) => ErrorClass::Remote,
            Error::Degenerate(_) | Error::RankDeficient { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Data,
        }
    }
}
