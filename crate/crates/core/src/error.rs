use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is not contained in the given superspace")]
    NotContained,

    #[error("linear form {index} is identically zero")]
    ZeroForm { index: usize },

    #[error("linear forms {first} and {second} define the same hyperplane")]
    DuplicateForm { first: usize, second: usize },

    #[error("arrangement must contain at least one hyperplane")]
    EmptyArrangement,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate realization: hyperplanes {first} and {second} coincide")]
    DegenerateRealization { first: usize, second: usize },

    #[error("edges {first} and {second} lie on the same line")]
    CoincidentLines { first: usize, second: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),

    #[error("internal consistency violation: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that indicate a bug (a violated theorem or broken
    /// internal invariant) rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
