use std::fmt;

use serde::Serialize;

/// Location of a token inside a source file. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },

    #[error("{span}: {source}")]
    At { span: SourceSpan, source: Box<Error> },

    #[error("unbound identifier `{0}`")]
    Unbound(String),

    #[error("unknown move address `{0}`")]
    UnknownMove(String),

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("causality cycle through event `{0}`")]
    CausalityCycle(String),

    #[error("event `{0}` conflicts with its own causal history")]
    HeredityViolation(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no partial order generates this set of plays: {0}")]
    NoPartialOrder(String),

    #[error("interface mismatch: {0}")]
    AddressMismatch(String),

    #[error("formula is not built from multiplicatives and lifting only: {0}")]
    NotMllLift(String),

    #[error("vertices unreachable from the root: {0:?}")]
    Unreachable(Vec<String>),

    #[error("game too large: {0} moves (at most 64 supported)")]
    TooLarge(usize),
}

impl Error {
    /// Attaches a source location unless one is already present.
    pub fn at(self, span: SourceSpan) -> Error {
        match self {
            e @ (Error::Syntax { .. } | Error::At { .. }) => e,
            e => Error::At { span, source: Box::new(e) },
        }
    }

    /// The innermost error, without location wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn span(&self) -> Option<&SourceSpan> {
        match self {
            Error::Syntax { span, .. } | Error::At { span, .. } => Some(span),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
