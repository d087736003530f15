use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("matrix is singular to working precision ({precision} bits, pivot column {column})")]
    Singular { precision: u32, column: usize },

    #[error("precision escalation exhausted after {attempts} attempts (last residual {residual:e} at {precision} bits)")]
    EscalationExhausted {
        attempts: u32,
        precision: u32,
        residual: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("failed to parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for failures caused by running out of working precision.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::EscalationExhausted { .. })
    }
}
