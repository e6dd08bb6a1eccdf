use thiserror::Error;

/// Errors raised by the library. Each variant maps to a stable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero ideal has no Newton polyhedron")]
    ZeroIdeal,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("truncation guard: {0}")]
    Guard(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::ZeroIdeal => "E_ZERO_IDEAL",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Budget(_) => "E_BUDGET",
            Error::Guard(_) => "E_GUARD",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
