use alloc::string::String;

/// Errors reported by the library.
///
/// Membership and shape failures name the violated property so that callers
/// (and the command line front end) can report it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index {index} out of range for size {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid move: {0}")]
    InvalidMove(&'static str),
    #[error("expected an even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not a stabilizer parity check matrix")]
    NotStabilizer,
    #[error("invalid pivot profile: {0}")]
    InvalidProfile(&'static str),
    #[error("membership check failed: {0}")]
    Membership(&'static str),
    #[error("invalid transitive set: {0}")]
    InvalidTransitiveSet(&'static str),
    #[error("invalid distribution table: {0}")]
    InvalidTable(String),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = core::result::Result<T, Error>;
