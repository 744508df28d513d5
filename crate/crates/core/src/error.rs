use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid flat tangle: {0}")]
    InvalidTangle(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("unknown circle id {0}")]
    UnknownCircle(usize),
    #[error("circle id {0} already present")]
    DuplicateCircle(usize),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity violation at line {line}: {message}")]
    WordArity { line: usize, message: String },
    #[error("orientation inconsistency: {0}")]
    Orientation(String),
    #[error("invalid PD code: {0}")]
    Pd(String),
    #[error("diagram has boundary points")]
    BoundaryPresent,
    #[error("crossing index {0} out of range")]
    SiteOutOfRange(usize),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("incompatible bimodules: {0}")]
    Incompatible(String),
}

impl Error {
    /// Parse-stage failures map to exit code 2 in the command-line tool.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::WordArity { .. } | Error::Orientation(_) | Error::Pd(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
