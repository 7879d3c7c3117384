// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by geometry construction, quadrature, assembly and solves.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample count must be odd and at least 5, got {0}")]
    BadSampleCount(usize),

    #[error("unknown builtin curve `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid builtin parameter: {0}")]
    BadBuiltinParameter(String),

    #[error("derivative order {0} is not supported (max 2)")]
    BadDerivativeOrder(usize),

    #[error("curve is not regular: |gamma'| = {speed:e} at s = {s}")]
    IrregularCurve { s: f64, speed: f64 },

    #[error("arclength inversion did not converge at target {target}")]
    ArclengthInversion { target: f64 },

    #[error("frame integration failed: {0}")]
    Integrator(String),

    #[error("surface Jacobian {jacobian:e} is not positive at (s, theta) = ({s}, {theta})")]
    NonPositiveJacobian { s: f64, theta: f64, jacobian: f64 },

    #[error("curve must have unit length and constant speed: {0}")]
    NotUnitSpeed(String),

    #[error("coincident points in kernel evaluation")]
    CoincidentPoints,

    #[error("quadrature construction failed: {0}")]
    Quadrature(String),

    #[error("inner quadrature region covers the whole curve (epsilon {0} too large)")]
    InnerRegionCoversCurve(f64),

    #[error("integrand is not finite at node (s, theta) = ({s}, {theta})")]
    NonFiniteIntegrand { s: f64, theta: f64 },

    #[error("invalid discretization: {0}")]
    BadDiscretization(String),

    #[error("non-finite matrix entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("singular value decomposition failed to converge")]
    SvdFailure,

    #[error("evaluation point is inside or too close to the fiber (distance {distance:e}, radius {radius:e})")]
    TooCloseToSurface { distance: f64, radius: f64 },

    #[error("surface self-intersects: radius {radius:e} is at least half the gap {gap:e}")]
    SelfIntersection { radius: f64, gap: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
