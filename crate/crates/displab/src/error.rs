use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Runtime guard that stopped an evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum GuardTrip {
    /// sup-norm exceeded the blow-up factor times its initial value
    BlowUp { t: f64, ratio: f64 },
    /// spectral tail rose above the resolution threshold
    Resolution { t: f64, tail: f64 },
    /// Burgers gradient grew past the allowed factor
    Gradient { t: f64, ratio: f64 },
}

impl fmt::Display for GuardTrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardTrip::BlowUp { t, ratio } => {
                write!(f, "blow-up guard at t={t:.6}: sup-norm grew by {ratio:.3e}")
            }
            GuardTrip::Resolution { t, tail } => {
                write!(f, "resolution guard at t={t:.6}: spectral tail {tail:.3e} of peak")
            }
            GuardTrip::Gradient { t, ratio } => {
                write!(f, "gradient guard at t={t:.6}: |u_x|_inf grew by {ratio:.3}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid `{field}`: {msg}")]
    InvalidArgument { field: String, msg: String },
    #[error("symbol `{name}` is not finite at wavenumber {xi}")]
    NonFiniteSymbol { name: String, xi: f64 },
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("{0}")]
    Guard(GuardTrip),
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

impl Error {
    pub fn invalid(field: &str, msg: impl Into<String>) -> Self {
        Error::InvalidArgument { field: field.to_string(), msg: msg.into() }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
