use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("search space of {size} profiles exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("no pure Nash equilibrium exists")]
    NoEquilibrium,

    #[error("potential key did not decrease at step {step} (mover {mover})")]
    PotentialViolation { step: usize, mover: usize },

    #[error("root tolerance exceeded: residual {residual:e}")]
    RootToleranceExceeded { residual: f64 },

    #[error("Lambert W did not converge for y = {0}")]
    NonConvergence(f64),

    #[error("objective {objective} is incompatible with policy {policy}")]
    ObjectiveMismatch { policy: String, objective: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
