//! One error type for the whole crate. The variants mirror how callers have
//! to react: fix the input, move the input off a singular configuration,
//! retry with looser tolerance, or shrink the job.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LabError {
    /// Input violates a documented precondition of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input is structurally fine but sits where the operation is undefined
    /// (pole proximity, ordinate caps, singular contour configurations).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration hit its cap without reaching the requested accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two refinement levels disagree by more than the convergence threshold.
    /// Both values are carried so the caller can judge the discrepancy.
    #[error("refinement did not converge in {context}: coarse {coarse:e}, fine {fine:e}")]
    NonConvergence {
        context: String,
        coarse: f64,
        fine: f64,
    },

    /// Resource guard tripped before starting work that would not fit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Derivative order outside the supported range.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// Least-squares fit is underdetermined or degenerate.
    #[error("fit error: {0}")]
    Fit(String),
}
