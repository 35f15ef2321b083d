//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the geometric and dynamical operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({0}, {1}) lies outside the domain of the operation")]
    PointOutsideDomain(f64, f64),

    #[error("base point ({0}, {1}) is not on the unit circle (tolerance 1e-12)")]
    BasePointNotOnCircle(f64, f64),

    #[error("singular point: the map has a pole at the given argument")]
    SingularPoint,

    #[error("invalid slit sequence: {0}")]
    InvalidSequence(String),

    #[error("truncation underflow: {0}")]
    TruncationUnderflow(String),

    #[error("curve exits the domain near vertex {0}")]
    CurveExitsDomain(usize),

    #[error("quadrature failed to reach the requested tolerance ({0:e} after {1} refinements)")]
    QuadratureNonconvergence(f64, usize),

    #[error("endpoints not connected at this grid resolution; refine the grid")]
    PointsDisconnectedAtResolution,

    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("boundary is not a Jordan curve: {0}")]
    NonJordanBoundary(String),

    #[error("conformal fit diverged: {0}")]
    FitDiverged(String),

    #[error("inverse evaluation diverged at ({0}, {1})")]
    InversionDiverged(f64, f64),

    #[error("coefficients do not define an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("self-map contract violated: iterate {0} exited the model domain by {1:e}")]
    SelfMapViolation(usize, f64),

    #[error("iteration did not converge within the budget of {0} steps")]
    ConvergenceFailure(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
