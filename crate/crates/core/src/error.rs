use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {value} exceeds the supported bound {max}")]
    RadicandTooLarge { value: u128, max: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("divisor must be a single radical term")]
    NotSingleTerm,

    #[error("ray has all components zero")]
    InvalidRay,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimError { expected: usize, found: usize },

    #[error("rays are not an orthogonal, non-proportional pair")]
    NotAPair,

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("triads {first} and {second} share two or more rays")]
    SharedPairViolation { first: usize, second: usize },

    #[error("{rays} rays exceed the brute-force cap of {max}")]
    TooLarge { rays: usize, max: usize },

    #[error("assignment covers {found} of {expected} rays")]
    PartialAssignment { expected: usize, found: usize },

    #[error("connection has no bijection from triad {from} to triad {to}")]
    MissingPair { from: usize, to: usize },

    #[error("invalid connection: {0}")]
    InvalidConnection(String),

    #[error("invalid context cycle: {0}")]
    InvalidCycle(String),

    #[error("invalid labelling: {0}")]
    InvalidLabeling(String),

    #[error("graph has no triads")]
    NoContexts,

    #[error("connection violates the cocycle condition on triads ({0}, {1}, {2})")]
    CocycleViolation(usize, usize, usize),

    #[error("ray {ray} receives labels {first} and {second} from different triads")]
    InconsistentTransport {
        ray: usize,
        first: char,
        second: char,
    },

    #[error("orthogonal rays {0} and {1} share a label but lie in no common triad")]
    AdjacentClash(usize, usize),

    #[error("corpus entry `{name}` failed its load-time check: {message}")]
    CorpusMismatch { name: String, message: String },

    #[error("ray set is not closed under triads: edge ({0}, {1}) lies in no triad")]
    NotClosed(usize, usize),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
