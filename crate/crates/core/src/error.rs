use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or contract-violating input (bad descriptor, empty problem, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Input outside the supported class: zero characteristic roots,
    /// non-splitting spectra where splitting is required, mixed-sequence
    /// fundamental bases, repeated roots where distinct roots are required.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A linear system has no solution; `row` is an original row index whose
    /// equation cannot be satisfied.
    #[error("inconsistent linear system (witness row {row})")]
    Inconsistent { row: usize },

    #[error("cannot extend `{seq}` backwards to n = {n}: last recurrence coefficient is zero")]
    BackwardExtension { seq: String, n: i64 },

    /// A derived closed form or identity disagreed with the direct computation.
    #[error("verification failed at n = {n}: expected {expected}, got {got}")]
    Mismatch {
        n: i64,
        expected: String,
        got: String,
    },

    #[error("composed polynomial of degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Mismatch { .. } => 1,
            Error::Invalid(_) | Error::Inconsistent { .. } | Error::BackwardExtension { .. } => 2,
            Error::Unsupported(_) | Error::DegreeCap { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
