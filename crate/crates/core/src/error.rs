use std::fmt;

use thiserror::Error;

/// Line/column position in grammar source text, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Coarse classification used by the command-line driver to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
    Resource,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },

    #[error("missing `start` declaration")]
    MissingStart,

    #[error("start symbol `{0}` is not defined by any rule")]
    UndefinedStart(String),

    #[error("duplicate rule at {pos}: {rule}")]
    DuplicateRule { pos: Pos, rule: String },

    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),

    #[error("{pos}: {message}")]
    Semantic { pos: Pos, message: String },

    #[error(
        "unfolding exceeded {limit} states; blowup at LR(0) state {state} [{kernel}] with {classes} stack classes"
    )]
    UnfoldLimit {
        limit: usize,
        state: usize,
        kernel: String,
        classes: usize,
    },

    #[error("determinization exceeded {limit} subset states")]
    SubsetLimit { limit: usize },

    #[error("stack is not chained from the start state at entry {index}")]
    UnchainedStack { index: usize },

    #[error("malformed automaton text at line {line}: {message}")]
    FsaFormat { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. } | Error::MissingStart | Error::DuplicateRule { .. } | Error::FsaFormat { .. } => {
                ErrorKind::Syntax
            }
            Error::UndefinedStart(_) | Error::InvalidGrammar(_) | Error::Semantic { .. } => ErrorKind::Semantic,
            Error::UnfoldLimit { .. } | Error::SubsetLimit { .. } => ErrorKind::Resource,
            Error::UnchainedStack { .. } | Error::Internal(_) => ErrorKind::Internal,
        }
    }

    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        Error::Semantic {
            pos,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
