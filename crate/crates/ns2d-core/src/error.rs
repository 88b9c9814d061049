//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature resolution {got} too low, need at least {need}")]
    ResolutionTooLow { got: usize, need: usize },

    #[error("fields live on different tori or cutoffs")]
    GeometryMismatch,

    #[error("field is not divergence-free (max mode residual {residual:.3e})")]
    NotDivergenceFree { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "linear solver stalled after {iterations} iterations \
         (residual {residual:.3e}, target {target:.3e})"
    )]
    SolverFailure {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    #[error("fixed-point iteration diverged after {iterations} iterations (residual {residual:.3e})")]
    PicardDivergence { iterations: usize, residual: f64 },

    #[error("scheme step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("mismatched trajectories: {0}")]
    TrajectoryMismatch(String),

    #[error("not enough samples: got {got}, need {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("eigensolver failed: {0}")]
    EigenFailure(String),

    #[error("trajectory carries no pressure data")]
    MissingPressure,

    #[error("degenerate data for rate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// Wrap a step-level failure with the index of the failing time step.
    pub fn at_step(self, step: usize) -> Error {
        Error::StepFailed {
            step,
            source: Box::new(self),
        }
    }
}
