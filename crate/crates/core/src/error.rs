use thiserror::Error;

/// Errors raised by the linear-algebra core and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("zero coordinate {index} raised to a negative power")]
    ZeroToNegativePower { index: usize },

    #[error("even root requested (q = {0}); only odd roots are sign preserving")]
    EvenRootRequested(u32),

    #[error("numeric overflow")]
    Overflow,

    #[error("vector is not in the kernel of the matrix")]
    NotInKernel,

    #[error("vector is not in the image of the matrix")]
    NotInImage,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error("sequence did not converge: {0}")]
    NonConvergent(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// `1` for problems with the input, `2` for failures inside an analysis.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::Parse(_)
            | Error::ConstraintViolated(_)
            | Error::PreconditionViolated(_) => 1,
            _ => 2,
        }
    }
}
