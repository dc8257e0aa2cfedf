use alloc::string::String;
use alloc::vec::Vec;

/// Everything that can go wrong inside the engine.
///
/// `Falsified` is special: it is raised when a checker that evaluates both
/// sides of a theorem independently finds them disagreeing. On valid inputs
/// it must never appear.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("universe must have at least one element")]
    EmptyUniverse,
    #[error("operation `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("operation `{symbol}`: expected {expected} entries, got {found}")]
    TableLength {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} is out of range for a universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("operation symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operation `{symbol}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {index} is not covered by an assignment of length {len}")]
    AssignmentTooShort { index: usize, len: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("{what} is {value}, above the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("not a congruence: `{symbol}` sends related tuples {left:?} and {right:?} to unrelated values")]
    NotCongruence {
        symbol: String,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    #[error("operation `{0}` is not a weak near-unanimity operation")]
    NotWnu(String),
    #[error("algebra is not SMB: {0}")]
    NotSmb(String),
    #[error("hypotheses not established: {0}")]
    HypothesesNotEstablished(String),
    #[error("theorem falsified: {0}")]
    Falsified(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
