use alloc::string::String;
use core::fmt;

/// Errors shared by every module of the crate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// Automaton text could not be parsed; `line` is 1-based.
    Parse { line: usize, reason: String },
    /// A value failed construction-time validation.
    Construction(String),
    /// An operation was called outside its stated precondition.
    Precondition(String),
    /// A brute-force search refused to run because a guard was exceeded.
    OracleRefused(String),
    /// Rejection sampling gave up after the configured number of attempts.
    RetryCapExceeded { attempts: u64 },
    /// No witness with the requested property exists.
    NoWitness(String),
    /// The automaton admits no reset word.
    NotSynchronizing,
    /// A case that is guaranteed by construction failed to materialize.
    /// Seeing this is a bug (or a violated unchecked precondition).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, reason } => write!(f, "parse error at line {line}: {reason}"),
            Error::Construction(reason) => write!(f, "construction error: {reason}"),
            Error::Precondition(reason) => write!(f, "precondition violated: {reason}"),
            Error::OracleRefused(reason) => write!(f, "oracle refused: {reason}"),
            Error::RetryCapExceeded { attempts } => {
                write!(f, "rejection sampling exhausted {attempts} attempts")
            }
            Error::NoWitness(reason) => write!(f, "no witness: {reason}"),
            Error::NotSynchronizing => write!(f, "automaton is not synchronizing"),
            Error::Internal(reason) => write!(f, "internal invariant breached: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
