use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("diagram violates {invariant} at {location}")]
    Violation { invariant: String, location: String },

    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("resource limit exceeded: {what} = {requested} (cap {cap})")]
    ResourceLimit {
        what: String,
        requested: usize,
        cap: usize,
    },

    #[error("diagram not in spanning set of degree {degree} {kind}: {diagram}")]
    NotInSpanningSet {
        degree: usize,
        kind: String,
        diagram: String,
    },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("insufficient truncation: operator known to degree {available}, {required} required")]
    InsufficientTruncation { available: usize, required: usize },

    #[error("gluing closes a loop without vertices")]
    VertexFreeLoop,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cache file missing: {0}")]
    CacheMissing(String),

    #[error("cache format version {found} is not supported (expected {expected}); rebuild with `jacobi cache rebuild`")]
    CacheVersion { found: u32, expected: u32 },

    #[error("cache integrity check failed: {0}")]
    CacheIntegrity(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
