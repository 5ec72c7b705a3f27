use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("objects live over different graphs")]
    AmbientMismatch,

    #[error("{dominator} does not dominate {dominated}: lk({dominated}) \\ st({dominator}) = {{{witness}}}")]
    NotDominated {
        dominator: String,
        dominated: String,
        witness: String,
    },

    #[error("{{{set}}} is not a connected component of the complement of st({vertex})")]
    NotAComponent { vertex: String, set: String },

    #[error("not a graph automorphism: {0}")]
    NotAGraphAutomorphism(String),

    #[error("{0}")]
    Capability(String),

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("automorphism is not in the transvection/partial-conjugation subgroup: {0}")]
    NotInPct(String),

    #[error("residual automorphism is not inner: {0}")]
    ResidualNotInner(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("graph is not focused: {0}")]
    NotFocused(String),

    #[error("graph is not austere: {0}")]
    NotAustere(String),

    #[error("graph has nontrivial symmetry; the focused model needs Aut(graph) = 1")]
    NontrivialSymmetry,

    #[error("phi violates condition ({condition}) at index {index}, bit {bit}")]
    PhiCondition {
        condition: &'static str,
        index: usize,
        bit: usize,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("work limit of {limit} exceeded ({what})")]
    WorkLimit { limit: u64, what: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
