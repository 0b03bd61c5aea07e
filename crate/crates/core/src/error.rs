use thiserror::Error;

/// Errors raised by estimation and distribution routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sites {first} and {second} share fewer than {required} overlapping years")]
    Overlap {
        first: String,
        second: String,
        required: usize,
    },

    #[error("fit failed at site {site}: {reason}")]
    SiteFit { site: String, reason: String },

    #[error("singular matrix: {reason} (hint: {hint})")]
    Singular { reason: String, hint: String },

    #[error("extrapolation direction: {0}")]
    ExtrapolationDirection(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures that stem from numerical procedures rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::Singular { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
