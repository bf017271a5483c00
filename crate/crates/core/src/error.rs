use thiserror::Error;

/// Errors raised across the workbench.
///
/// Bound-exceeded and inconclusive outcomes are kept distinct from input
/// errors so callers (and the CLI exit codes) can tell them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {index} out of range for universe of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("constant c{index} is not bound (vocabulary has {count} constants)")]
    UnboundConstant { index: usize, count: usize },
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("tuple length mismatch: {left} vs {right}")]
    TupleLengthMismatch { left: usize, right: usize },
    #[error("free variable `{0}` is not assigned")]
    UnassignedVariable(String),
    #[error("not a partial homomorphism: {0}")]
    NotPartialHomomorphism(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("diagram does not commute: {0}")]
    NotCommuting(String),
    #[error("{what} bound exceeded: {actual} > {bound}")]
    BoundExceeded {
        what: &'static str,
        bound: usize,
        actual: usize,
    },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors that stem from a search bound rather than bad input.
    pub fn is_bound_related(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. } | Error::Inconclusive(_))
    }
}
