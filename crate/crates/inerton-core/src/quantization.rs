//! Action integrals, de Broglie relations and the plane-wave equation.
//!
//! The effective oscillator `H_eff = p²/2M + M(π/T)²X²/2 = E` carries the
//! shortened action
//!
//! ```text
//! S1(X) = ∫₀^X √(2M·(E − M(π/T)²X′²/2)) dX′
//! ```
//!
//! evaluated here by adaptive quadrature after the turning-point
//! substitution `X′ = X_max·sin θ` (which removes the square-root slope
//! singularity at `X_max`), with the closed arcsine form kept alongside as
//! an independent oracle. Over the full cyclic period `2T` the action
//! increment is `J = ∮p dX = 2·E·T`; identifying `J` with an action quantum
//! `h` yields the de Broglie pair `λ_dB = h/(M·v0)` and `ν = E/h`, and the
//! matching plane wave `ψ = ψ0·exp[2πi(X/λ − νt)]` solves both wave
//! equations
//!
//! ```text
//! (ħ²/2M)·∂²ψ/∂X² + E·ψ = 0          (stationary)
//! iħ·∂ψ/∂t + (ħ²/2M)·∂²ψ/∂X² = 0    (time-dependent)
//! ```
//!
//! whose normalized residuals the suite drives to round-off — and checks
//! that a deliberately detuned wavelength is detected at the predicted
//! residual level.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DerivedQuantities;
use crate::quadrature;

fn check_oscillator(energy: f64, mass: f64, t_half: f64) -> Result<()> {
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
    Ok(())
}

/// Turning point `X_max = √(2E/M)·T/π` of the effective oscillator.
pub fn turning_point(energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    check_oscillator(energy, mass, t_half)?;
    Ok((2.0 * energy / mass).sqrt() * t_half / std::f64::consts::PI)
}

/// Shortened action `S1(X)` by adaptive quadrature with the substitution
/// `X′ = X_max·sin θ` (integrand `(2ET/π)·cos²θ`, smooth up to the turning
/// point).
pub fn shortened_action(x: f64, energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    let u = action_phase(x, energy, mass, t_half)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    let factor = 2.0 * energy * t_half / std::f64::consts::PI;
    let q = quadrature::integral(
        |theta| factor * theta.cos() * theta.cos(),
        0.0,
        u.asin(),
        1e-13,
        1e-15 * factor.max(1.0),
    )?;
    Ok(q.value)
}

/// Closed arcsine form of the shortened action,
/// `S1 = (E·T/π)·(asin u + u·√(1 − u²))` with `u = X/X_max` — the
/// independent oracle for [`shortened_action`].
pub fn shortened_action_closed(x: f64, energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    let u = action_phase(x, energy, mass, t_half)?;
    Ok(energy * t_half / std::f64::consts::PI * (u.asin() + u * (1.0 - u * u).sqrt()))
}

/// Validates `0 <= X <= X_max` and returns `u = X/X_max` (0 when both vanish).
fn action_phase(x: f64, energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    let x_max = turning_point(energy, mass, t_half)?;
    if !x.is_finite() || x < 0.0 || x > x_max * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::OutsideAllowedRegion { x, x_max });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((x / x_max).min(1.0))
}

/// Cyclic action increment `J = ∮p dX` over one full period `2T` of the
/// oscillator solution, evaluated by quadrature of `p·Ẋ = M·(AΩ)²·cos²(Ωt)`
/// with `Ω = π/T`; equals `2·E·T` identically.
pub fn cyclic_action(energy: f64, mass: f64, t_half: f64) -> Result<f64> {
    check_oscillator(energy, mass, t_half)?;
    if energy == 0.0 {
        return Ok(0.0);
    }
    let omega = std::f64::consts::PI / t_half;
    let amplitude = (2.0 * energy / mass).sqrt() / omega;
    let momentum_scale = mass * amplitude * omega;
    let integrand = move |t: f64| {
        let velocity = amplitude * omega * (omega * t).cos();
        momentum_scale * (omega * t).cos() * velocity
    };
    let q = quadrature::integral(
        integrand,
        0.0,
        2.0 * t_half,
        1e-13,
        1e-15 * (energy * t_half).max(1.0),
    )?;
    Ok(q.value)
}

/// Shortened-action profile on a uniform grid of the allowed region plus the
/// cyclic increment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionResult {
    /// Grid positions `0 = X_0 < … < X_{n−1} = X_max`.
    pub positions: Vec<f64>,
    /// `S1` at each grid position (quadrature route).
    pub shortened: Vec<f64>,
    /// Cyclic increment `J = ∮p dX = 2ET`.
    pub cyclic: f64,
    /// Turning point `X_max`.
    pub turning_point: f64,
}

/// Evaluates the action profile on `n >= 2` uniform grid points.
pub fn action_profile(energy: f64, mass: f64, t_half: f64, n: usize) -> Result<ActionResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "action profile needs at least 2 grid points, got {n}"
        )));
    }
    let x_max = turning_point(energy, mass, t_half)?;
    let positions: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                x_max
            } else {
                x_max * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let shortened = positions
        .iter()
        .map(|&x| shortened_action(x, energy, mass, t_half))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionResult {
        positions,
        shortened,
        cyclic: cyclic_action(energy, mass, t_half)?,
        turning_point: x_max,
    })
}

/// De Broglie pair derived from the action quantum, with residuals against
/// the trajectory periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeBroglieRelations {
    /// Matter wavelength `λ_dB = h/(M·v0)`.
    pub wavelength: f64,
    /// Wave frequency `ν = E/h`.
    pub frequency: f64,
    /// Signed residual `λ_dB − λ` against the spatial period `λ = v0·T`;
    /// zero under the derived closure `h = 2TE`.
    pub wavelength_residual: f64,
    /// Signed residual `ν − 1/(2T)` against the collision frequency; zero
    /// under the derived closure.
    pub frequency_residual: f64,
}

/// Evaluates the de Broglie relations `λ_dB = h/(M·v0)`, `ν = E/h`.
/// Undefined at rest (`v0 = 0`): there is no momentum to carry a wavelength.
pub fn de_broglie(dq: &DerivedQuantities) -> Result<DeBroglieRelations> {
    if dq.initial_speed == 0.0 {
        return Err(Error::DegenerateRest);
    }
    let wavelength = dq.action_quantum / (dq.particle_mass * dq.initial_speed);
    let frequency = dq.kinetic_energy / dq.action_quantum;
    Ok(DeBroglieRelations {
        wavelength,
        frequency,
        wavelength_residual: wavelength - dq.particle_period,
        frequency_residual: frequency - dq.frequency,
    })
}

/// Plane-wave specification `ψ = ψ0·exp[2πi(X/λ − νt)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSpec {
    /// Amplitude `ψ0 > 0`.
    pub amplitude: f64,
    /// Wavelength `λ > 0` (the de Broglie wavelength when derived).
    pub wavelength: f64,
    /// Frequency `ν > 0`.
    pub frequency: f64,
    /// Action quantum `h > 0`.
    pub action_quantum: f64,
}

impl WaveSpec {
    /// Unit-amplitude plane wave carried by the de Broglie pair of a model.
    pub fn from_quantities(dq: &DerivedQuantities) -> Result<Self> {
        let relations = de_broglie(dq)?;
        let spec = Self {
            amplitude: 1.0,
            wavelength: relations.wavelength,
            frequency: relations.frequency,
            action_quantum: dq.action_quantum,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (value, name) in [
            (self.amplitude, "amplitude psi0"),
            (self.wavelength, "wavelength"),
            (self.frequency, "frequency"),
            (self.action_quantum, "action quantum h"),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "wave {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates the plane wave `ψ(X, t) = ψ0·exp[2πi(X/λ − νt)]`; the modulus
/// is `ψ0` everywhere.
pub fn wavefunction(spec: &WaveSpec, x: f64, t: f64) -> Complex64 {
    let phase = 2.0 * std::f64::consts::PI * (x / spec.wavelength - spec.frequency * t);
    Complex64::from_polar(spec.amplitude, phase)
}

/// Normalized maxima of the wave-equation residuals over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerResiduals {
    /// `max |(ħ²/2M)·ψXX + E·ψ| / (E·ψ0)` — stationary equation.
    pub stationary: f64,
    /// `max |iħ·ψt + (ħ²/2M)·ψXX| / (E·ψ0)` — time-dependent equation.
    pub time_dependent: f64,
}

/// Evaluates both wave-equation residuals for a plane wave on `(X, t)` grid
/// points, using the analytic derivatives `ψXX = −(2π/λ)²·ψ` and
/// `ψt = −2πiν·ψ`.
pub fn schrodinger_residuals(
    spec: &WaveSpec,
    mass: f64,
    energy: f64,
    grid: &[(f64, f64)],
) -> Result<SchrodingerResiduals> {
    spec.validate()?;
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive and finite, got {mass}"
        )));
    }
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "energy must be positive and finite, got {energy}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidGrid);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let hbar = spec.action_quantum / two_pi;
    let curvature = -(two_pi / spec.wavelength) * (two_pi / spec.wavelength);
    let normalization = energy * spec.amplitude;
    let mut stationary: f64 = 0.0;
    let mut time_dependent: f64 = 0.0;
    for &(x, t) in grid {
        let psi = wavefunction(spec, x, t);
        let psi_xx = curvature * psi;
        let psi_t = Complex64::new(0.0, -two_pi * spec.frequency) * psi;
        let kinetic = hbar * hbar / (2.0 * mass) * psi_xx;
        let r_stationary = kinetic + energy * psi;
        let r_time = Complex64::new(0.0, hbar) * psi_t + kinetic;
        stationary = stationary.max(r_stationary.norm() / normalization);
        time_dependent = time_dependent.max(r_time.norm() / normalization);
    }
    Ok(SchrodingerResiduals {
        stationary,
        time_dependent,
    })
}
