use thiserror::Error;

/// Every failure the library can report.
///
/// Domain errors (a predicate's precondition does not hold, a search bound was
/// exhausted) are distinguished from malformed input so the CLI can map them to
/// different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("value is zero")]
    ZeroValue,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity {arity} exceeds the configured cap {cap}")]
    CapExceeded { arity: usize, cap: usize },
    #[error("invalid port: {0}")]
    PortError(String),
    #[error("grid has dangling ports; use gate_signature")]
    OpenGrid,
    #[error("grid has no dangling ports; use brute_force_partition")]
    ClosedGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("enumeration exceeded the cap of {0} steps")]
    EnumerationCap(u64),
    #[error("signature {0} is not an EO signature")]
    NotEO(String),
    #[error("signature is identically zero")]
    ZeroSignature,
    #[error("support is not contained in EO^P for the given pairing")]
    PairingViolation,
    #[error("empty signature set")]
    EmptySet,
    #[error("mode violation: {0}")]
    ModeViolation(String),
    #[error("coprimality violated: {0}")]
    CoprimalityError(String),
    #[error("vertex {0} has no affine-class certificate")]
    NonAffineVertex(String),
    #[error("vertex {0} has no product-class certificate")]
    NonProductVertex(String),
    #[error("string {0} is not in the support")]
    StringNotInSupport(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("cannot interpolate: {0}")]
    NotInterpolatable(String),
    #[error("no binary gate with distinct parameters within {0} vertices")]
    NoAsymmetricGateFound(usize),
    #[error("signature has nonzero values at several Hamming weights")]
    MixedWeights,
    #[error("padding unbalanced: {delta0} zero-pins vs {delta1} one-pins; partition function is 0")]
    UnbalancedPadding { delta0: usize, delta1: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("oracle backend failure: {0}")]
    Oracle(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for input-shape problems (bad files, bad literals) as opposed to
    /// domain outcomes.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
