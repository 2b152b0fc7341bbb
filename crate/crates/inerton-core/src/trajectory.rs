//! Closed-form trajectories of the particle and its inerton cloud.
//!
//! Over the `n`-th half-period (`nT <= t < (n+1)T`) the solutions read, with
//! `λ = v0·T` and `Λ = c·T`:
//!
//! ```text
//! Ẋ(t) = v0·(1 − |sin(πt/T)|)
//! X(t) = v0·t + (λ/π)·((−1)^n·cos(πt/T) − (1 + 2n))
//! x(t) = (Λ/π)·|sin(πt/T)|
//! ẋ(t) = c·(−1)^n·cos(πt/T)
//! ```
//!
//! Internally every formula is evaluated through the reduced phase
//! `u = t/T − n ∈ [0, 1)`, which turns the four expressions into the
//! cusp-free forms `v0·(1 − sin(πu))`, `v0·t + (λ/π)·(cos(πu) − 1 − 2n)`,
//! `(Λ/π)·sin(πu)` and `c·cos(πu)`. The reduction snaps `t/T` to the nearest
//! integer when it sits within a few ulps, so period boundaries evaluate
//! exactly: `Ẋ(nT) = v0` and `x(nT) = 0` bit-for-bit.
//!
//! At a boundary the position is branch-independent while the cloud velocity
//! jumps from `−c` to `+c`; the `*_sided` variants expose both one-sided
//! values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DerivedQuantities, EnsembleVelocities};

/// Joint state of the particle and the cloud front at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    /// Time of the sample.
    pub t: f64,
    /// Particle position `X(t)`, non-negative and non-decreasing.
    pub particle_pos: f64,
    /// Particle velocity `Ẋ(t) ∈ [0, v0]`.
    pub particle_vel: f64,
    /// Distance `x(t) ∈ [0, Λ/π]` from the particle to the cloud front.
    pub cloud_pos: f64,
    /// Cloud front velocity `ẋ(t) ∈ [−c, c]`.
    pub cloud_vel: f64,
}

/// Per-sample diagnostic values attached to a series by the mechanics layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Effective oscillator Hamiltonian `p²/2M + M(π/T)²X²/2`.
    pub effective_hamiltonian: f64,
    /// Coupled-system Lagrangian `−M0c²·√(radical)`; `None` where the
    /// radical goes negative and the value is non-evaluable.
    pub interaction_lagrangian: Option<f64>,
    /// The radical `1 − [M0Ẋ² + m0ẋ² − (2π/T)√(m0M0)(Xẋ + v0x)]/(M0c²)`.
    pub radical: f64,
}

/// A sampled trajectory with optional per-sample diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeries {
    /// States in strictly increasing time order.
    pub samples: Vec<SystemState>,
    /// Diagnostics aligned with `samples` once annotated; `None` until then.
    pub diagnostics: Option<Vec<Diagnostics>>,
}

impl TrajectorySeries {
    /// Series without diagnostics.
    pub fn new(samples: Vec<SystemState>) -> Self {
        Self {
            samples,
            diagnostics: None,
        }
    }
}

/// Which side of a period boundary a one-sided evaluation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Limit from below, `t → nT⁻`.
    Left,
    /// Limit from above, `t → nT⁺` (the primary, right-continuous value).
    Right,
}

/// Splits `t` into the half-period index `n` and the reduced phase
/// `u = t/T − n ∈ [0, 1)`, snapping to the boundary when `t/T` is within
/// 4 ulps of an integer. On a boundary the `Left` branch reports the closing
/// period (`n − 1`, `u = 1`), the `Right` branch the opening one (`n`, `u = 0`).
fn period_split(t: f64, t_half: f64, branch: Branch) -> (f64, f64) {
    let ratio = t / t_half;
    let nearest = ratio.round();
    let snap = 4.0 * f64::EPSILON * ratio.abs().max(1.0);
    if (ratio - nearest).abs() <= snap {
        match branch {
            Branch::Right => (nearest, 0.0),
            Branch::Left => (nearest - 1.0, 1.0),
        }
    } else {
        let n = ratio.floor();
        (n, ratio - n)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Particle velocity `Ẋ(t) = v0·(1 − |sin(πt/T)|)`; exactly `v0` at `t = nT`.
pub fn particle_velocity(t: f64, dq: &DerivedQuantities) -> Result<f64> {
    particle_velocity_sided(t, dq, Branch::Right)
}

/// One-sided particle velocity at a period boundary (elsewhere the branch is
/// irrelevant).
pub fn particle_velocity_sided(t: f64, dq: &DerivedQuantities, branch: Branch) -> Result<f64> {
    check_time(t)?;
    let (_, u) = period_split(t, dq.half_period, branch);
    Ok(dq.initial_speed * (1.0 - (std::f64::consts::PI * u).sin()))
}

/// Particle position `X(t) = v0·t + (λ/π)·((−1)^n·cos(πt/T) − (1 + 2n))`;
/// continuous across boundaries, non-decreasing, `X(0) = 0`.
pub fn particle_position(t: f64, dq: &DerivedQuantities) -> Result<f64> {
    particle_position_sided(t, dq, Branch::Right)
}

/// One-sided particle position at a period boundary; both branches agree
/// there (continuity), which the verification suite checks explicitly.
pub fn particle_position_sided(t: f64, dq: &DerivedQuantities, branch: Branch) -> Result<f64> {
    check_time(t)?;
    let (n, u) = period_split(t, dq.half_period, branch);
    let drift = dq.initial_speed * t;
    let wave = dq.particle_period / std::f64::consts::PI
        * ((std::f64::consts::PI * u).cos() - 1.0 - 2.0 * n);
    Ok(drift + wave)
}

/// Cloud front distance `x(t) = (Λ/π)·|sin(πt/T)| ∈ [0, Λ/π]`; exactly `0`
/// at `t = nT`. At rest (`v0 = 0`) there is no cloud and the distance stays 0.
pub fn cloud_position(t: f64, dq: &DerivedQuantities) -> Result<f64> {
    cloud_position_sided(t, dq, Branch::Right)
}

/// One-sided cloud front distance at a period boundary.
pub fn cloud_position_sided(t: f64, dq: &DerivedQuantities, branch: Branch) -> Result<f64> {
    check_time(t)?;
    if dq.initial_speed == 0.0 {
        return Ok(0.0);
    }
    let (_, u) = period_split(t, dq.half_period, branch);
    Ok(dq.cloud_period / std::f64::consts::PI * (std::f64::consts::PI * u).sin())
}

/// Cloud front velocity `ẋ(t) = c·(−1)^n·cos(πt/T)`; jumps from `−c` to `+c`
/// at every `t = nT` (the primary value is the right-continuous `+c`). At
/// rest the cloud does not exist and the velocity stays 0.
pub fn cloud_velocity(t: f64, dq: &DerivedQuantities) -> Result<f64> {
    cloud_velocity_sided(t, dq, Branch::Right)
}

/// One-sided cloud front velocity; at `t = nT` the `Left` branch reports the
/// incoming `−c`, the `Right` branch the outgoing `+c`.
pub fn cloud_velocity_sided(t: f64, dq: &DerivedQuantities, branch: Branch) -> Result<f64> {
    check_time(t)?;
    if dq.initial_speed == 0.0 {
        return Ok(0.0);
    }
    let (_, u) = period_split(t, dq.half_period, branch);
    Ok(dq.limit_speed * (std::f64::consts::PI * u).cos())
}

/// State of the `r`-th inerton and of the particle over that inerton's
/// single flight period `0 <= t_r <= T_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertonPeriodState {
    /// Index `r` of the inerton within the ensemble.
    pub index: usize,
    /// Proper time `t_r` within the flight period.
    pub t: f64,
    /// Transverse excursion `x⊥ = (Λ_r/π)·sin(πt_r/T_r)`.
    pub transverse_pos: f64,
    /// Transverse velocity `ẋ⊥ = c·cos(πt_r/T_r)`.
    pub transverse_vel: f64,
    /// Constant longitudinal velocity `ẋ∥ = 3·v0r/(2π)`.
    pub longitudinal_vel: f64,
    /// Particle position `X = v0r·t_r + (λ_r/π)·(cos(πt_r/T_r) − 1)`.
    pub particle_pos: f64,
    /// Particle velocity `Ẋ = v0r·(1 − sin(πt_r/T_r))`.
    pub particle_vel: f64,
}

/// Closed-form single-period solution for the `r`-th inerton: emitted at
/// `t_r = 0` with the particle moving at `v0r`, farthest at `t_r = T_r/2`,
/// reabsorbed at `t_r = T_r`.
pub fn inerton_period_solution(
    r: usize,
    t_r: f64,
    ensemble: &EnsembleVelocities,
    limit_speed: f64,
) -> Result<InertonPeriodState> {
    let n = ensemble.emission_speeds.len();
    if r >= n {
        return Err(Error::InvalidParameter(format!(
            "inerton index r = {r} exceeds the ensemble size N = {n}"
        )));
    }
    let period = ensemble.half_periods[r];
    if !t_r.is_finite() || t_r < 0.0 || t_r > period {
        return Err(Error::OutsideSinglePeriod { t: t_r, period });
    }
    let v0r = ensemble.emission_speeds[r];
    let phase = std::f64::consts::PI * t_r / period;
    Ok(InertonPeriodState {
        index: r,
        t: t_r,
        transverse_pos: ensemble.cloud_periods[r] / std::f64::consts::PI * phase.sin(),
        transverse_vel: limit_speed * phase.cos(),
        longitudinal_vel: 3.0 * v0r / (2.0 * std::f64::consts::PI),
        particle_pos: v0r * t_r
            + ensemble.particle_periods[r] / std::f64::consts::PI * (phase.cos() - 1.0),
        particle_vel: v0r * (1.0 - phase.sin()),
    })
}

/// Harmonic-oscillator reduction of the particle motion at energy `E`:
/// `X(t) = √(2E/(M·(π/T)²))·sin(πt/T)`, the solution of the effective
/// Hamiltonian `p²/2M + M(π/T)²X²/2 = E`.
pub fn oscillator_position(t: f64, energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive and finite, got {mass}"
        )));
    }
    if !(t_half.is_finite() && t_half > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "half-period T must be positive and finite, got {t_half}"
        )));
    }
    if !(energy.is_finite() && energy >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "energy must be non-negative and finite, got {energy}"
        )));
    }
    check_time(t)?;
    let omega = std::f64::consts::PI / t_half;
    let amplitude = (2.0 * energy / mass).sqrt() / omega;
    Ok(amplitude * (omega * t).sin())
}

/// Samples the closed-form trajectory on a grid of times.
///
/// The grid must be non-empty, non-negative and strictly increasing. At rest
/// (`v0 = 0`) every sample is the constant state `(t, 0, 0, 0, 0)`.
pub fn sample_trajectory(grid: &[f64], dq: &DerivedQuantities) -> Result<TrajectorySeries> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid);
    }
    let mut previous = f64::NEG_INFINITY;
    for &t in grid {
        if !t.is_finite() || t < 0.0 || t <= previous {
            return Err(Error::InvalidGrid);
        }
        previous = t;
    }
    let samples = grid
        .iter()
        .map(|&t| {
            Ok(SystemState {
                t,
                particle_pos: particle_position(t, dq)?,
                particle_vel: particle_velocity(t, dq)?,
                cloud_pos: cloud_position(t, dq)?,
                cloud_vel: cloud_velocity(t, dq)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectorySeries::new(samples))
}
