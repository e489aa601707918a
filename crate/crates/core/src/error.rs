use thiserror::Error;

use crate::lemma::MultiplierFailure;

/// Errors raised by the analysis routines.
///
/// Negative mathematical findings (no multiplier exists, a candidate does not
/// cover the sphere) are reported through [`Error::NoMultiplier`] and
/// [`Error::Negative`] so callers can tell them apart from bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("not homogeneous with respect to the dilation (term degrees {degrees:?})")]
    NotHomogeneous { degrees: Vec<f64> },

    #[error("cannot differentiate: {0}")]
    Differentiation(String),

    #[error("no multiplier: {0}")]
    NoMultiplier(MultiplierFailure),

    #[error("{0}")]
    Negative(String),

    #[error("certificate failed verification: {0}")]
    Unsound(String),

    #[error("trajectory diverged at t = {t} (|x| = {norm:e})")]
    Divergence { t: f64, norm: f64 },

    #[error("problem file: {0}")]
    Problem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    ///
    /// 1 is a negative finding, 2 a usage or input error and 3 an internal
    /// verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoMultiplier(_) | Error::Negative(_) | Error::Divergence { .. } => 1,
            Error::Unsound(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
