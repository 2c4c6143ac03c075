use thiserror::Error;

/// Errors raised by datum handling, enumeration and the derived computations.
///
/// Generator and root indices in messages are 1-based, matching the datum
/// file format and the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Input(String),
    #[error("invalid bond ({i},{j}): {reason}")]
    InvalidBond { i: usize, j: usize, reason: String },
    #[error("bond ({i},{j}) with m = {m} has an irrational form value; use the float backend")]
    IrrationalEntry { i: usize, j: usize, m: u32 },
    #[error("gram entry ({i},{j}) = {value} violates (C1): {reason}")]
    C1Violation {
        i: usize,
        j: usize,
        value: String,
        reason: String,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("not a root in the enumerated store: {0}")]
    UnknownRoot(String),
    #[error("store enumerated to depth {available}, need depth {needed}")]
    InsufficientDepth { needed: usize, available: usize },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("{x} does not dominate {y}")]
    NotDominant { x: String, y: String },
    #[error("roots are linearly dependent: {0}")]
    NotIndependent(String),
    #[error("canonical pair certification failed: {0}")]
    CertificationFailed(String),
    #[error("operation requires an infinite dihedral subsystem")]
    FiniteSubsystem,
    #[error("{0} is not a root of the subsystem")]
    NotInSubsystem(String),
}

impl Error {
    /// Machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::Input(_) => "InputError",
            Error::InvalidBond { .. } => "InvalidBond",
            Error::IrrationalEntry { .. } => "IrrationalEntry",
            Error::C1Violation { .. } => "C1Violation",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::UnknownRoot(_) => "UnknownRoot",
            Error::InsufficientDepth { .. } => "InsufficientDepth",
            Error::CapExceeded(_) => "CapExceeded",
            Error::NotDominant { .. } => "NotDominant",
            Error::NotIndependent(_) => "NotIndependent",
            Error::CertificationFailed(_) => "CertificationFailed",
            Error::FiniteSubsystem => "FiniteSubsystem",
            Error::NotInSubsystem(_) => "NotInSubsystem",
        }
    }

    /// True for outcomes caused by a resource bound rather than bad input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded(_) | Error::InsufficientDepth { .. } | Error::CertificationFailed(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
