//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Everything that can go wrong when evaluating the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter violates its domain (non-positive mass, period, …).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The particle speed must satisfy `0 <= v0 < c`.
    #[error("speed v0 = {v0} violates the precondition 0 <= v0 < c (c = {c})")]
    SpeedOutOfRange { v0: f64, c: f64 },

    /// Trajectories are defined for non-negative times only.
    #[error("time must be non-negative, got t = {0}")]
    NegativeTime(f64),

    /// Single-period inerton solutions are defined on `0 <= t_r <= T_r`.
    #[error("proper time t_r = {t} lies outside the single period [0, {period}]")]
    OutsideSinglePeriod { t: f64, period: f64 },

    /// Sampling grids must be non-empty, non-negative and strictly increasing.
    #[error("grid must be non-empty, non-negative and strictly increasing")]
    InvalidGrid,

    /// At `v0 = 0` the cloud equation of motion degenerates (it divides by
    /// `v0`); integration falls back to the rest-state shortcut instead.
    #[error("system is degenerate at v0 = 0: the cloud equation divides by v0")]
    DegenerateRest,

    /// The integrator produced a non-finite state or could not proceed.
    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailed { t: f64, reason: String },

    /// Action integrals are defined inside the classically allowed region.
    #[error("position X = {x} lies outside the classically allowed region [0, {x_max}]")]
    OutsideAllowedRegion { x: f64, x_max: f64 },

    /// The spatial period handed to the hydrodynamic balance must equal `v0·T`.
    #[error("spatial period lambda = {lambda} is inconsistent with v0*T = {expected}")]
    InconsistentPeriod { lambda: f64, expected: f64 },

    /// The canonical cloud-velocity transform divides by `sqrt(m0)`.
    #[error("cloud rest mass m0 = 0: the canonical velocity transform is undefined")]
    ZeroCloudMass,

    /// Residual evaluation is rejected next to the cusps of the closed forms.
    #[error("t = {t} lies within {tol} of a cusp (multiple of T/2) of the closed forms")]
    CuspAdjacent { t: f64, tol: f64 },

    /// The adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge: error estimate {estimate} after {intervals} intervals")]
    QuadratureDidNotConverge { estimate: f64, intervals: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
