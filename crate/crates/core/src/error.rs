use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix determinant {det} differs from 1 by more than {tolerance:e}")]
    NonUnitDeterminant { det: f64, tolerance: f64 },

    #[error("point has non-positive y = {0}")]
    NonpositiveY(f64),

    #[error("frame index {0} out of range 1..=3")]
    IndexOutOfRange(usize),

    #[error("curve is not unit speed (speed^2 = {0})")]
    NotUnitSpeed(f64),

    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("phase case {requested:?} does not match parameters (expected {actual:?})")]
    CaseMismatch { requested: crate::trajectory::PhaseCase, actual: crate::trajectory::PhaseCase },

    #[error("reconstructed curve reaches y <= 0 (rbar sign inconsistent with qbar branch)")]
    NonpositiveYReached,

    #[error("Legendre closed-projection branch needs |q| > 2, got q = {0}")]
    StrengthTooSmall(f64),

    #[error("integrator step size underflow at s = {s} (y = {y})")]
    StepUnderflow { s: f64, y: f64 },

    #[error("denominator (1 + a)/2 vanishes for m/k = 1")]
    DegenerateDenominator,

    #[error("ratio m/k = {m}/{k} must satisfy 0 < m < k")]
    InvalidRatio { m: u32, k: u32 },

    #[error("integers {m} and {k} are not coprime")]
    NotCoprime { m: u32, k: u32 },

    #[error("phase is not rotational: qbar^2 - 4 sin^2(sigma) = {0} <= 0")]
    NonRotationalPhase(f64),

    #[error("algebra vector is zero")]
    ZeroVector,

    #[error("projection of exp(tX) degenerates to a point (X is parallel to the Reeb direction)")]
    DegenerateProjection,

    #[error("contact angle must lie in [0, pi], got {0}")]
    InvalidContactAngle(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
