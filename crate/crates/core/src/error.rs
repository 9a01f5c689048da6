use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown catalog algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("structure constants violate the Jacobi identity (max residual {0:e})")]
    Jacobi(f64),

    #[error("functionals do not define an asymmetric norm: all are non-positive along {witness:?}")]
    InvalidNorm { witness: Vec<f64> },

    #[error("control policy violation at t = {time}: {reason}")]
    PolicyViolation { time: f64, reason: String },

    #[error("covector collapsed to zero at t = {0}")]
    Degenerate(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("precondition failed at sample {index} (t = {time}): {reason}")]
    SamplePrecondition {
        index: usize,
        time: f64,
        reason: String,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit code used by the command-line front end.
    ///
    /// `2` covers malformed or invalid input, `3` covers runtime precondition
    /// and policy failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::Input(_)
            | Error::UnknownAlgebra(_)
            | Error::Jacobi(_)
            | Error::InvalidNorm { .. } => 2,
            Error::PolicyViolation { .. }
            | Error::Degenerate(_)
            | Error::Precondition(_)
            | Error::SamplePrecondition { .. } => 3,
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
