//! Lagrangian and Hamiltonian evaluators for the particle–cloud system.
//!
//! The free relativistic particle carries `L = −M0c²·√(1 − v0²/c²)`. Once the
//! inerton cloud is coupled in, the Lagrangian becomes
//!
//! ```text
//! L = −M0c²·√(radical)
//! radical = 1 − [M0·Ẋ² + m0·ẋ² − (2π/T)·√(m0·M0)·(X·ẋ + v0·x)]/(M0·c²)
//! ```
//!
//! The radical is exposed as a first-class diagnostic: along the closed-form
//! trajectories it is *not* constant (it swings between `1 − 2v0²/c²` and
//! `1 + 2v0²/c²` over a period), which the verification report documents
//! rather than asserts away.
//!
//! The canonical cloud velocity `x̃̇ = ẋ − (π/T)·√(M0/m0)·X` decouples the
//! oscillators and leads to the momenta `p = M·Ẋ`, `p̃ = m·x̃̇` and three
//! Hamiltonian presentations (coordinate, momentum and mixed form), plus the
//! effective one-dimensional oscillator `H_eff = p²/2M + M(π/T)²·X²/2` whose
//! conservation along the oscillator solution the suite verifies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DerivedQuantities;
use crate::trajectory::{oscillator_position, Diagnostics, SystemState, TrajectorySeries};

/// Lagrangian of the free relativistic particle, `−M0·c²·√(1 − v0²/c²)`.
pub fn classical_lagrangian(rest_mass: f64, v0: f64, c: f64) -> Result<f64> {
    if !(rest_mass.is_finite() && rest_mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rest mass must be positive and finite, got {rest_mass}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "limit speed c must be positive and finite, got {c}"
        )));
    }
    if !v0.is_finite() || v0 < 0.0 || v0 >= c {
        return Err(Error::SpeedOutOfRange { v0, c });
    }
    let beta = v0 / c;
    Ok(-rest_mass * c * c * (1.0 - beta * beta).sqrt())
}

/// Radical of the coupled Lagrangian together with the Lagrangian value,
/// which is non-evaluable where the radical goes negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadicalDiagnostic {
    /// `1 − [M0Ẋ² + m0ẋ² − (2π/T)√(m0M0)(Xẋ + v0x)]/(M0c²)`.
    pub radical: f64,
    /// `−M0c²·√(radical)` when the radical is non-negative.
    pub lagrangian: Option<f64>,
}

/// Coupled particle–cloud Lagrangian evaluated at one state; reports the
/// radical alongside the value instead of failing when it dips negative.
pub fn interaction_lagrangian(s: &SystemState, dq: &DerivedQuantities) -> RadicalDiagnostic {
    let omega2 = 2.0 * std::f64::consts::PI / dq.half_period;
    let coupling = (dq.cloud_rest_mass * dq.rest_mass).sqrt();
    let bracket = dq.rest_mass * s.particle_vel * s.particle_vel
        + dq.cloud_rest_mass * s.cloud_vel * s.cloud_vel
        - omega2
            * coupling
            * (s.particle_pos * s.cloud_vel + dq.initial_speed * s.cloud_pos);
    let rest_energy = dq.rest_mass * dq.limit_speed * dq.limit_speed;
    let radical = 1.0 - bracket / rest_energy;
    RadicalDiagnostic {
        radical,
        lagrangian: (radical >= 0.0).then(|| -rest_energy * radical.sqrt()),
    }
}

/// Coupled Lagrangian after the canonical cloud-velocity transform; equals
/// [`interaction_lagrangian`] value-for-value (the transform is exact), but
/// is computed through the decoupled-oscillator form
/// `1 − [M0Ẋ² − M0(π/T)²X² + m0x̃̇² − (2π/T)√(m0M0)v0x]/(M0c²)`.
pub fn oscillator_lagrangian(s: &SystemState, dq: &DerivedQuantities) -> Result<RadicalDiagnostic> {
    let shifted = canonical_transform(s, dq)?;
    let omega = std::f64::consts::PI / dq.half_period;
    let coupling = (dq.cloud_rest_mass * dq.rest_mass).sqrt();
    let bracket = dq.rest_mass * s.particle_vel * s.particle_vel
        - dq.rest_mass * omega * omega * s.particle_pos * s.particle_pos
        + dq.cloud_rest_mass * shifted * shifted
        - 2.0 * omega * coupling * dq.initial_speed * s.cloud_pos;
    let rest_energy = dq.rest_mass * dq.limit_speed * dq.limit_speed;
    let radical = 1.0 - bracket / rest_energy;
    Ok(RadicalDiagnostic {
        radical,
        lagrangian: (radical >= 0.0).then(|| -rest_energy * radical.sqrt()),
    })
}

/// Canonical cloud velocity `x̃̇ = ẋ − (π/T)·√(M0/m0)·X`; undefined for a
/// massless cloud (`m0 = 0`, i.e. `v0 = 0`).
pub fn canonical_transform(s: &SystemState, dq: &DerivedQuantities) -> Result<f64> {
    if dq.cloud_rest_mass == 0.0 {
        return Err(Error::ZeroCloudMass);
    }
    let omega = std::f64::consts::PI / dq.half_period;
    Ok(s.cloud_vel - omega * (dq.rest_mass / dq.cloud_rest_mass).sqrt() * s.particle_pos)
}

/// Conjugate momenta of the particle and the (transformed) cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momenta {
    /// Particle momentum `p = M·Ẋ`.
    pub particle: f64,
    /// Cloud momentum `p̃ = m·x̃̇`; identically 0 for a massless cloud.
    pub cloud: f64,
}

/// Momenta `p = M·Ẋ` and `p̃ = m·x̃̇` at one state.
pub fn momenta(s: &SystemState, dq: &DerivedQuantities) -> Momenta {
    let cloud = if dq.cloud_rest_mass == 0.0 {
        // m = 0 forces p̃ = m·x̃̇ = 0 whatever the (undefined) transform is.
        0.0
    } else {
        let shifted = s.cloud_vel
            - std::f64::consts::PI / dq.half_period
                * (dq.rest_mass / dq.cloud_rest_mass).sqrt()
                * s.particle_pos;
        dq.cloud_mass * shifted
    };
    Momenta {
        particle: dq.particle_mass * s.particle_vel,
        cloud,
    }
}

/// The Hamiltonian of the system in its three presentations plus the
/// effective oscillator part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonians {
    /// Coordinate form `M(π/T)²X² + Mc² + π√(m·M0)·v0·x/T`.
    pub coordinate: f64,
    /// Momentum form `p²/M + p̃²/m + (M0c)²/M`.
    pub momentum: f64,
    /// Mixed form `p²/2M + M(π/T)²X²/2 + ((Mc)² + (M0c)²)/2M + p̃²/2m
    /// + π√(m·M0)·v0·x/T`.
    pub mixed: f64,
    /// Effective oscillator `p²/2M + M(π/T)²X²/2`.
    pub effective: f64,
}

/// Evaluates all Hamiltonian presentations at one state.
///
/// The coordinate and momentum forms are both reported as diagnostics; they
/// are *not* numerically equal along the closed-form trajectories, which the
/// verification report documents as a known discrepancy.
pub fn hamiltonians(s: &SystemState, dq: &DerivedQuantities) -> Hamiltonians {
    let omega = std::f64::consts::PI / dq.half_period;
    let p = momenta(s, dq);
    let c2 = dq.limit_speed * dq.limit_speed;
    let particle_kinetic = p.particle * p.particle / dq.particle_mass;
    let cloud_kinetic = if dq.cloud_mass == 0.0 {
        0.0
    } else {
        p.cloud * p.cloud / dq.cloud_mass
    };
    let oscillator_potential = dq.particle_mass * omega * omega * s.particle_pos * s.particle_pos;
    let cloud_coupling = omega * (dq.cloud_mass * dq.rest_mass).sqrt()
        * dq.initial_speed
        * s.cloud_pos;
    let rest_term = dq.rest_mass * dq.rest_mass * c2 / dq.particle_mass;
    let coordinate = oscillator_potential + dq.particle_mass * c2 + cloud_coupling;
    let momentum = particle_kinetic + cloud_kinetic + rest_term;
    let mixed = particle_kinetic / 2.0
        + oscillator_potential / 2.0
        + (dq.particle_mass * c2 + rest_term) / 2.0
        + cloud_kinetic / 2.0
        + cloud_coupling;
    let effective = particle_kinetic / 2.0 + oscillator_potential / 2.0;
    Hamiltonians {
        coordinate,
        momentum,
        mixed,
        effective,
    }
}

/// Effective oscillator Hamiltonian `p²/2M + M(π/T)²X²/2` for explicit
/// momentum and position.
pub fn effective_hamiltonian(momentum: f64, position: f64, mass: f64, t_half: f64) -> f64 {
    let omega = std::f64::consts::PI / t_half;
    momentum * momentum / (2.0 * mass) + mass * omega * omega * position * position / 2.0
}

/// Maximum deviation `max_t |H_eff(t) − E|` of the effective Hamiltonian
/// along the oscillator solution of energy `E`, scanned over a time grid.
pub fn heff_conservation(energy: f64, mass: f64, t_half: f64, grid: &[f64]) -> Result<f64> {
    heff_deviation_scaled(energy, mass, t_half, grid, 1.0)
}

/// Same scan with the oscillator amplitude scaled by `amplitude_scale` —
/// scale 1 checks conservation, any other scale quantifies how quickly the
/// scan detects an off-shell trajectory (deviation `(scale² − 1)·E`).
pub fn heff_deviation_scaled(
    energy: f64,
    mass: f64,
    t_half: f64,
    grid: &[f64],
    amplitude_scale: f64,
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid);
    }
    let omega = std::f64::consts::PI / t_half;
    let mut worst: f64 = 0.0;
    for &t in grid {
        let position = amplitude_scale * oscillator_position(t, energy, mass, t_half)?;
        let velocity =
            amplitude_scale * (2.0 * energy / mass).sqrt() * (omega * t).cos();
        let h = effective_hamiltonian(mass * velocity, position, mass, t_half);
        worst = worst.max((h - energy).abs());
    }
    Ok(worst)
}

/// Every mechanics quantity evaluated at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicsSample {
    /// Free-particle Lagrangian `−M0c²√(1 − v0²/c²)` (state-independent).
    pub classical_lagrangian: f64,
    /// Coupled Lagrangian `−M0c²·√(radical)`, `None` where non-evaluable.
    pub interaction_lagrangian: Option<f64>,
    /// Transformed (decoupled-oscillator) Lagrangian, equal value-for-value.
    pub oscillator_lagrangian: Option<f64>,
    /// The radical under the coupled Lagrangian's square root.
    pub radical: f64,
    /// Particle momentum `p = M·Ẋ`.
    pub particle_momentum: f64,
    /// Cloud momentum `p̃ = m·x̃̇`.
    pub cloud_momentum: f64,
    /// Canonical cloud velocity `x̃̇`.
    pub transformed_cloud_vel: f64,
    /// Coordinate-form Hamiltonian.
    pub hamiltonian_coordinate: f64,
    /// Momentum-form Hamiltonian.
    pub hamiltonian_momentum: f64,
    /// Mixed-form Hamiltonian.
    pub hamiltonian_mixed: f64,
    /// Effective oscillator Hamiltonian.
    pub hamiltonian_effective: f64,
}

/// Evaluates the full mechanics panel at one state. Requires a massive cloud
/// (`m0 > 0`) because the canonical transform enters several entries.
pub fn mechanics_sample(s: &SystemState, dq: &DerivedQuantities) -> Result<MechanicsSample> {
    let shifted = canonical_transform(s, dq)?;
    let coupled = interaction_lagrangian(s, dq);
    let transformed = oscillator_lagrangian(s, dq)?;
    let p = momenta(s, dq);
    let h = hamiltonians(s, dq);
    Ok(MechanicsSample {
        classical_lagrangian: classical_lagrangian(
            dq.rest_mass,
            dq.initial_speed,
            dq.limit_speed,
        )?,
        interaction_lagrangian: coupled.lagrangian,
        oscillator_lagrangian: transformed.lagrangian,
        radical: coupled.radical,
        particle_momentum: p.particle,
        cloud_momentum: p.cloud,
        transformed_cloud_vel: shifted,
        hamiltonian_coordinate: h.coordinate,
        hamiltonian_momentum: h.momentum,
        hamiltonian_mixed: h.mixed,
        hamiltonian_effective: h.effective,
    })
}

/// Attaches per-sample diagnostics (effective Hamiltonian, coupled
/// Lagrangian, radical) to a sampled series.
pub fn annotate(series: &mut TrajectorySeries, dq: &DerivedQuantities) {
    let diagnostics = series
        .samples
        .iter()
        .map(|s| {
            let coupled = interaction_lagrangian(s, dq);
            Diagnostics {
                effective_hamiltonian: effective_hamiltonian(
                    dq.particle_mass * s.particle_vel,
                    s.particle_pos,
                    dq.particle_mass,
                    dq.half_period,
                ),
                interaction_lagrangian: coupled.lagrangian,
                radical: coupled.radical,
            }
        })
        .collect();
    series.diagnostics = Some(diagnostics);
}
