//! Model parameters, derived quantities and the relativistic identities.
//!
//! A configuration is fixed by the rest mass `M0`, the initial (and
//! asymptotically restored) particle speed `v0`, the limit speed `c`, the
//! collision half-period `T` and the number of emitted inertons `N`. Every
//! other quantity of the theory follows:
//!
//! ```text
//! λ  = v0·T                    spatial period of the particle
//! Λ  = c·T                     spatial period (amplitude scale) of the cloud
//! m0 = M0·v0²/c²               rest mass of the inerton cloud
//! M  = M0/√(1 − v0²/c²)        relativistic particle mass
//! m  = m0/√(1 − v0²/c²)        relativistic cloud mass
//! E  = M·v0²/2                 kinetic energy entering the quantization
//! ν  = 1/(2T)                  collision frequency
//! p0 = M·v0                    initial momentum
//! h  = 2·T·E                   action quantum (default closure)
//! ```
//!
//! The action quantum can either be derived from the mechanics (`h := 2TE`,
//! the default) or supplied by the caller, in which case the de Broglie
//! residuals report how far the supplied value sits from the closure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the action quantum `h` is tied to the rest of the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum HClosure {
    /// Derive `h := 2·T·E` from the mechanics (the default).
    Derived,
    /// Take `h` verbatim; the de Broglie identities are then diagnostics that
    /// may legitimately report nonzero residuals.
    Given(f64),
}

/// Primary inputs of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Rest mass `M0` of the particle.
    pub rest_mass: f64,
    /// Initial particle speed `v0`, restored after every collision.
    pub initial_speed: f64,
    /// Limit speed `c` of the substrate (speed of light).
    pub limit_speed: f64,
    /// Collision half-period `T`: the cloud is reabsorbed at every `t = nT`.
    pub half_period: f64,
    /// Number of inertons `N` emitted over one half-period.
    pub ensemble_size: usize,
    /// Closure rule for the action quantum `h`.
    pub h_closure: HClosure,
}

impl ModelParams {
    /// Canonical laboratory configuration in natural units.
    pub fn canonical() -> Self {
        Self {
            rest_mass: 1.0,
            initial_speed: 0.6,
            limit_speed: 1.0,
            half_period: 1.0,
            ensemble_size: 4,
            h_closure: HClosure::Derived,
        }
    }

    /// Builds a configuration from a given action quantum instead of a given
    /// half-period: `T := h/(2E)` with `E = M·v0²/2`, so that the de Broglie
    /// identities close exactly around the supplied `h`.
    pub fn with_period_from_h(
        rest_mass: f64,
        initial_speed: f64,
        limit_speed: f64,
        h: f64,
        ensemble_size: usize,
    ) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "action quantum h must be positive and finite, got {h}"
            )));
        }
        if initial_speed <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "deriving T from h requires v0 > 0, got {initial_speed}"
            )));
        }
        let gamma = lorentz_factor(initial_speed, limit_speed)?;
        let energy = rest_mass * gamma * initial_speed * initial_speed / 2.0;
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kinetic energy derived from (M0, v0, c) is not positive: {energy}"
            )));
        }
        let params = Self {
            rest_mass,
            initial_speed,
            limit_speed,
            half_period: h / (2.0 * energy),
            ensemble_size,
            h_closure: HClosure::Given(h),
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks every domain constraint; all operations assume these hold.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.rest_mass, "rest mass M0"),
            (self.limit_speed, "limit speed c"),
            (self.half_period, "half-period T"),
        ];
        for (value, name) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if !self.initial_speed.is_finite()
            || self.initial_speed < 0.0
            || self.initial_speed >= self.limit_speed
        {
            return Err(Error::SpeedOutOfRange {
                v0: self.initial_speed,
                c: self.limit_speed,
            });
        }
        if self.ensemble_size == 0 {
            return Err(Error::InvalidParameter(
                "ensemble size N must be at least 1".into(),
            ));
        }
        if let HClosure::Given(h) = self.h_closure {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "action quantum h must be positive and finite, got {h}"
                )));
            }
        }
        Ok(())
    }
}

/// Everything computable from [`ModelParams`], with the inputs carried along
/// so downstream operations are self-contained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    /// Rest mass `M0` (copied input).
    pub rest_mass: f64,
    /// Initial speed `v0` (copied input).
    pub initial_speed: f64,
    /// Limit speed `c` (copied input).
    pub limit_speed: f64,
    /// Collision half-period `T` (copied input).
    pub half_period: f64,
    /// Spatial period of the particle, `λ = v0·T`.
    pub particle_period: f64,
    /// Spatial period of the cloud, `Λ = c·T`; the cloud amplitude is `Λ/π`.
    pub cloud_period: f64,
    /// Rest mass of the inerton cloud, `m0 = M0·v0²/c²`.
    pub cloud_rest_mass: f64,
    /// Relativistic particle mass, `M = M0/√(1 − v0²/c²)`.
    pub particle_mass: f64,
    /// Relativistic cloud mass, `m = m0/√(1 − v0²/c²)`.
    pub cloud_mass: f64,
    /// Kinetic energy `E = M·v0²/2` entering the quantization relations.
    pub kinetic_energy: f64,
    /// Collision frequency `ν = 1/(2T)`.
    pub frequency: f64,
    /// Initial momentum `p0 = M·v0`.
    pub momentum: f64,
    /// Action quantum `h`: `2·T·E` under the derived closure, verbatim under
    /// the given closure.
    pub action_quantum: f64,
}

/// Computes all derived quantities for a validated parameter set.
pub fn derive_quantities(params: &ModelParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let ModelParams {
        rest_mass,
        initial_speed,
        limit_speed,
        half_period,
        ..
    } = *params;
    let gamma = lorentz_factor(initial_speed, limit_speed)?;
    let cloud_rest_mass = rest_mass * initial_speed * initial_speed / (limit_speed * limit_speed);
    let particle_mass = rest_mass * gamma;
    let kinetic_energy = particle_mass * initial_speed * initial_speed / 2.0;
    let action_quantum = match params.h_closure {
        HClosure::Derived => 2.0 * half_period * kinetic_energy,
        HClosure::Given(h) => h,
    };
    Ok(DerivedQuantities {
        rest_mass,
        initial_speed,
        limit_speed,
        half_period,
        particle_period: initial_speed * half_period,
        cloud_period: limit_speed * half_period,
        cloud_rest_mass,
        particle_mass,
        cloud_mass: cloud_rest_mass * gamma,
        kinetic_energy,
        frequency: 1.0 / (2.0 * half_period),
        momentum: particle_mass * initial_speed,
        action_quantum,
    })
}

/// Lorentz factor `γ = 1/√(1 − v0²/c²)`.
pub fn lorentz_factor(v0: f64, c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "limit speed c must be positive and finite, got {c}"
        )));
    }
    if !v0.is_finite() || v0 < 0.0 || v0 >= c {
        return Err(Error::SpeedOutOfRange { v0, c });
    }
    let beta = v0 / c;
    Ok(1.0 / (1.0 - beta * beta).sqrt())
}

/// Relativistic mass `M = M0/√(1 − v0²/c²)`.
pub fn relativistic_mass(rest_mass: f64, v0: f64, c: f64) -> Result<f64> {
    if !(rest_mass.is_finite() && rest_mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rest mass must be positive and finite, got {rest_mass}"
        )));
    }
    Ok(rest_mass * lorentz_factor(v0, c)?)
}

/// Density of the moving substrate element, `ρ = ρ0/(1 − v0²/c²)`.
///
/// Follows from the mass-balance relation `ρ·Δv/Δt = −c²·Δρ/Δl` evaluated
/// over one half-period (`Δl = λ/2`, `Δt = T/2`, `Δv = −v0`).
pub fn density_transform(rho0: f64, v0: f64, c: f64) -> Result<f64> {
    if !(rho0.is_finite() && rho0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rest density rho0 must be positive and finite, got {rho0}"
        )));
    }
    let gamma = lorentz_factor(v0, c)?;
    Ok(rho0 * gamma * gamma)
}

/// Mass growth per shrinking volume: moving mass scales as `1/√(1 − v0²/c²)`
/// because the density grows as `1/(1 − v0²/c²)` while the volume contracts
/// by `√(1 − v0²/c²)`.
pub fn mass_volume_scaling(v0: f64, c: f64) -> Result<f64> {
    lorentz_factor(v0, c)
}

/// Which half of the oscillation the balance is evaluated over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfStage {
    /// First half-period: the particle decelerates, `Δv = −v0`, `Δρ = ρ − ρ0`.
    Deceleration,
    /// Second half-period: the particle accelerates back, `Δv = +v0`,
    /// `Δρ = ρ0 − ρ`.
    Acceleration,
}

/// Finite-difference inputs of the substrate mass balance `ρ·Δv/Δt = −c²·Δρ/Δl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroParams {
    /// Density of the substrate element at rest.
    pub rest_density: f64,
    /// Density of the moving substrate element.
    pub density: f64,
    /// Velocity increment over the stage.
    pub delta_v: f64,
    /// Spatial extent of the stage, `Δl = λ/2`.
    pub delta_l: f64,
    /// Duration of the stage, `Δt = T/2`.
    pub delta_t: f64,
}

impl HydroParams {
    /// Builds the balance inputs for one half-period stage, taking the moving
    /// density from [`density_transform`].
    pub fn for_stage(rho0: f64, v0: f64, c: f64, lambda: f64, t_half: f64, stage: HalfStage) -> Result<Self> {
        let density = density_transform(rho0, v0, c)?;
        Self::for_stage_with_density(rho0, density, v0, lambda, t_half, stage)
    }

    /// Same as [`HydroParams::for_stage`] with an explicit moving density —
    /// lets callers probe the balance with a deliberately wrong `ρ`.
    pub fn for_stage_with_density(
        rho0: f64,
        density: f64,
        v0: f64,
        lambda: f64,
        t_half: f64,
        stage: HalfStage,
    ) -> Result<Self> {
        if !(t_half.is_finite() && t_half > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half-period T must be positive and finite, got {t_half}"
            )));
        }
        let expected = v0 * t_half;
        let scale = expected.abs().max(lambda.abs());
        if (lambda - expected).abs() > 1e-12 * scale {
            return Err(Error::InconsistentPeriod { lambda, expected });
        }
        let delta_v = match stage {
            HalfStage::Deceleration => -v0,
            HalfStage::Acceleration => v0,
        };
        Ok(Self {
            rest_density: rho0,
            density,
            delta_v,
            delta_l: lambda / 2.0,
            delta_t: t_half / 2.0,
        })
    }

    /// Density increment of the stage: `ρ − ρ0` while decelerating,
    /// `ρ0 − ρ` while accelerating back.
    pub fn delta_rho(&self) -> f64 {
        if self.delta_v <= 0.0 {
            self.density - self.rest_density
        } else {
            self.rest_density - self.density
        }
    }
}

/// Normalized residual of the mass balance `ρ·Δv/Δt = −c²·Δρ/Δl` with `ρ`
/// taken from [`density_transform`]; vanishes identically for any valid
/// parameter set.
pub fn hydrodynamic_residual(rho0: f64, v0: f64, c: f64, lambda: f64, t_half: f64) -> Result<f64> {
    let hydro = HydroParams::for_stage(rho0, v0, c, lambda, t_half, HalfStage::Deceleration)?;
    Ok(balance_residual(&hydro, c))
}

/// Normalized residual of the mass balance for explicit inputs. Returns
/// `(lhs − rhs)/max(|lhs|, |rhs|, ε)` so a perfect balance gives `0` and a
/// broken one gives an `O(1)` value regardless of unit scale.
pub fn balance_residual(hydro: &HydroParams, c: f64) -> f64 {
    let lhs = hydro.density * hydro.delta_v / hydro.delta_t;
    let rhs = if hydro.delta_l == 0.0 {
        // Rest case: no displacement, no density change; the balance is 0 = 0.
        0.0
    } else {
        -c * c * hydro.delta_rho() / hydro.delta_l
    };
    let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    (lhs - rhs) / scale
}

/// Per-inerton kinematic data for the ensemble of `N` inertons emitted over
/// one half-period.
///
/// The `r`-th inerton leaves the particle moving at
/// `v0r = v0·(1 − sin(rπ/2N))`, carries rest mass `m_r = M0·v0r²/c²`
/// (so that `M0·v0r² = m_r·c²`), and lives on its own half-period `T_r`
/// with spatial periods `λ_r = v0r·T_r` and `Λ_r = c·T_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleVelocities {
    /// Particle speed at the emission of each inerton, strictly decreasing.
    pub emission_speeds: Vec<f64>,
    /// Rest mass of each inerton, `m_r = M0·v0r²/c²`.
    pub masses: Vec<f64>,
    /// Half-period of each inerton.
    pub half_periods: Vec<f64>,
    /// Spatial particle period seen by each inerton, `λ_r = v0r·T_r`.
    pub particle_periods: Vec<f64>,
    /// Spatial cloud period of each inerton, `Λ_r = c·T_r`.
    pub cloud_periods: Vec<f64>,
}

/// Rule fixing the per-inerton half-periods `T_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PeriodRule {
    /// Every inerton shares the collision half-period `T` (the default).
    UniformT,
    /// Explicit per-inerton half-periods; the list length must equal `N`.
    PerInerton(Vec<f64>),
}

/// Builds the velocity ensemble `v0r = v0·(1 − sin(rπ/2N))`, `r = 0..N−1`.
pub fn ensemble_velocities(params: &ModelParams, rule: &PeriodRule) -> Result<EnsembleVelocities> {
    params.validate()?;
    let n = params.ensemble_size;
    let half_periods: Vec<f64> = match rule {
        PeriodRule::UniformT => vec![params.half_period; n],
        PeriodRule::PerInerton(list) => {
            if list.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "per-inerton period list has {} entries, expected N = {n}",
                    list.len()
                )));
            }
            for &t_r in list {
                if !(t_r.is_finite() && t_r > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "per-inerton half-period must be positive and finite, got {t_r}"
                    )));
                }
            }
            list.clone()
        }
    };
    let c = params.limit_speed;
    let mut emission_speeds = Vec::with_capacity(n);
    let mut masses = Vec::with_capacity(n);
    let mut particle_periods = Vec::with_capacity(n);
    let mut cloud_periods = Vec::with_capacity(n);
    for (r, &t_r) in half_periods.iter().enumerate() {
        let phase = (r as f64) * std::f64::consts::PI / (2.0 * n as f64);
        let v0r = params.initial_speed * (1.0 - phase.sin());
        emission_speeds.push(v0r);
        masses.push(params.rest_mass * v0r * v0r / (c * c));
        particle_periods.push(v0r * t_r);
        cloud_periods.push(c * t_r);
    }
    Ok(EnsembleVelocities {
        emission_speeds,
        masses,
        half_periods,
        particle_periods,
        cloud_periods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_superluminal_speed() {
        let mut params = ModelParams::canonical();
        params.initial_speed = 1.0;
        assert!(matches!(
            derive_quantities(&params),
            Err(Error::SpeedOutOfRange { .. })
        ));
        params.initial_speed = 1.5;
        assert!(matches!(
            derive_quantities(&params),
            Err(Error::SpeedOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_nonpositive_scales() {
        for (field, value) in [(0usize, 0.0), (1, -1.0), (2, 0.0)] {
            let mut params = ModelParams::canonical();
            match field {
                0 => params.rest_mass = value,
                1 => params.half_period = value,
                _ => params.limit_speed = value,
            }
            assert!(derive_quantities(&params).is_err());
        }
        let mut params = ModelParams::canonical();
        params.ensemble_size = 0;
        assert!(derive_quantities(&params).is_err());
    }

    #[test]
    fn rest_case_is_legal_and_degenerate() {
        let mut params = ModelParams::canonical();
        params.initial_speed = 0.0;
        let dq = derive_quantities(&params).unwrap();
        assert_eq!(dq.particle_period, 0.0);
        assert_eq!(dq.cloud_rest_mass, 0.0);
        assert_eq!(dq.kinetic_energy, 0.0);
        assert_eq!(dq.particle_mass, params.rest_mass);
    }

    #[test]
    fn given_h_is_taken_verbatim() {
        let mut params = ModelParams::canonical();
        params.h_closure = HClosure::Given(0.9);
        let dq = derive_quantities(&params).unwrap();
        assert_eq!(dq.action_quantum, 0.9);
    }

    #[test]
    fn period_from_h_closes_the_loop() {
        let params = ModelParams::with_period_from_h(1.0, 0.6, 1.0, 0.45, 4).unwrap();
        assert!((params.half_period - 1.0).abs() < 1e-15);
        let dq = derive_quantities(&params).unwrap();
        assert!((dq.action_quantum - 2.0 * dq.half_period * dq.kinetic_energy).abs() < 1e-15);
    }

    #[test]
    fn ensemble_rejects_mismatched_period_list() {
        let params = ModelParams::canonical();
        let rule = PeriodRule::PerInerton(vec![1.0, 1.0]);
        assert!(ensemble_velocities(&params, &rule).is_err());
    }

    #[test]
    fn hydro_rejects_inconsistent_period() {
        assert!(matches!(
            hydrodynamic_residual(1.0, 0.6, 1.0, 0.7, 1.0),
            Err(Error::InconsistentPeriod { .. })
        ));
    }

    #[test]
    fn density_rejects_nonpositive_rest_density() {
        assert!(density_transform(0.0, 0.6, 1.0).is_err());
        assert!(density_transform(-1.0, 0.6, 1.0).is_err());
    }
}
