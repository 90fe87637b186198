use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of panels before meeting its tolerance.
    #[error("quadrature did not converge: best estimate {value:e} with error {error:e} after {panels} panels")]
    Convergence { value: f64, error: f64, panels: usize },

    /// A function returned a non-finite value at a point where it had to be finite.
    #[error("non-finite value {value} at {at}")]
    Evaluation { at: f64, value: f64 },

    /// The expected sign structure of a function could not be found.
    #[error("sign structure not found at t = {t}: {detail}")]
    Structure { t: f64, detail: String },

    /// The requested dimension is not supported by the operation.
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    /// An inner failure annotated with where it happened.
    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
