use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Each variant maps onto one of the stable CLI exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The caller violated a documented precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// Two routes to the same polynomial disagreed, or an exact cancellation failed.
    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),

    /// The requested cone angle is not below the Euclidean angle.
    #[error("non-hyperbolic input: cone angle {angle:.6} is not below alpha0 = {alpha0:.6}")]
    NonHyperbolic { angle: f64, alpha0: f64 },

    /// A root finder, tracker or quadrature step failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// No discriminant root passed the collision test.
    #[error("geometric structure error: {0}")]
    Geometry(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::IdentityMismatch(_) => 3,
            Error::NonHyperbolic { .. } => 4,
            Error::Numerical(_) | Error::Geometry(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
