use thiserror::Error;

/// Errors raised by the algebraic pipeline, the oracle, and the command line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QesError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coupling case not admissible: {0}")]
    Admissibility(String),

    /// Negative inverse-square coefficient, the radial problem collapses.
    #[error("fall to the centre: s^2 + 2*theta*m_r = {radicand} < 0 for s = {s}")]
    FallToCentre { s: i32, radicand: f64 },

    #[error("degenerate ansatz parameters: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("branch {branch} out of range for block of size {size}")]
    BranchOutOfRange { branch: usize, size: usize },

    #[error("configuration error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl QesError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        QesError::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for QesError {
    fn from(e: std::io::Error) -> Self {
        QesError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QesError>;
