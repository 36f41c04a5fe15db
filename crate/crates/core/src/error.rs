use thiserror::Error;

use crate::charts::Chart;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("matrix is not positive definite (pivot = {pivot:e})")]
    NotPositiveDefinite { pivot: f64 },

    #[error("coordinates outside the {chart} domain: {reason}")]
    Domain { chart: Chart, reason: String },

    #[error("{chart} chart is at gimbal lock (det S = {det:e})")]
    GimbalLock { chart: Chart, det: f64 },

    #[error("invalid inertia matrix: {0}")]
    InvalidInertia(String),

    #[error("invalid torque profile: {0}")]
    InvalidTorque(String),

    #[error("integrator produced a non-finite derivative at t = {t}")]
    NonFiniteDerivative { t: f64 },

    #[error("trajectory time grids differ: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
