//! TOML configuration: parsing, defaults, and resolution into core types.
//!
//! Every key is optional; omitted keys fall back to the canonical
//! natural-unit laboratory (`M0 = c = T = 1`, `v0 = 0.6`, `N = 4`, derived
//! action quantum, RK4 at `T/1000` with scheduled reflections, ten periods
//! at 1000 samples each). Unknown keys are rejected so typos cannot silently
//! change a run.

use std::path::Path;

use serde::Deserialize;

use inerton_core::integrator::{EventMode, IntegratorConfig, Method};
use inerton_core::model::{derive_quantities, HClosure, ModelParams, PeriodRule};
use inerton_core::DerivedQuantities;

use crate::{CliError, CliResult};

/// Root of the configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub model: ModelSection,
    pub integrator: IntegratorSection,
    pub grid: GridSection,
}

/// `[model]` — physical inputs.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    /// Rest mass of the particle.
    #[serde(rename = "M0")]
    pub rest_mass: f64,
    /// Initial particle speed, `0 <= v0 < c`.
    pub v0: f64,
    /// Limit speed of the substrate.
    pub c: f64,
    /// Collision half-period.
    #[serde(rename = "T")]
    pub half_period: f64,
    /// Number of inertons emitted per half-period.
    #[serde(rename = "N")]
    pub ensemble_size: usize,
    /// `"derived"` ties `h = 2*T*E`; `"given"` takes `model.h` verbatim.
    pub h_mode: HMode,
    /// Action quantum, required with (and only with) `h_mode = "given"`.
    pub h: Option<f64>,
    /// Optional per-inerton half-periods (length `N`); default: all equal `T`.
    #[serde(rename = "T_r")]
    pub per_inerton_periods: Option<Vec<f64>>,
    /// Rest density of the substrate entering the mass balance.
    pub rho0: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            rest_mass: 1.0,
            v0: 0.6,
            c: 1.0,
            half_period: 1.0,
            ensemble_size: 4,
            h_mode: HMode::Derived,
            h: None,
            per_inerton_periods: None,
            rho0: 1.0,
        }
    }
}

/// Closure rule for the action quantum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HMode {
    Derived,
    Given,
}

/// `[integrator]` — stepper settings.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    /// `"rk4"` (fixed step) or `"dp54"` (adaptive Dormand–Prince).
    pub method: MethodName,
    /// Step in absolute time units; default `T/1000`.
    pub step: Option<f64>,
    /// Relative tolerance of the adaptive pair.
    pub rel_tol: f64,
    /// Absolute tolerance of the adaptive pair.
    pub abs_tol: f64,
    /// `"scheduled"` reflects exactly at `t = nT`; `"detected"` locates the
    /// front crossing by bisection.
    pub event_mode: EventModeName,
    /// Bisection width target in absolute time units; default `1e-12*T`.
    pub event_tol: Option<f64>,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            method: MethodName::Rk4,
            step: None,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            event_mode: EventModeName::Scheduled,
            event_tol: None,
        }
    }
}

/// Stepper choice by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Rk4,
    Dp54,
}

/// Event-location mode by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventModeName {
    Scheduled,
    Detected,
}

/// `[grid]` — sampling grid for trajectory artifacts.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Horizon in units of `T` (may be fractional).
    pub t_end: f64,
    /// Uniform samples per half-period.
    pub samples_per_period: u32,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            samples_per_period: 1000,
        }
    }
}

/// A parsed, validated configuration resolved into core types.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// Validated model inputs.
    pub params: ModelParams,
    /// Everything derivable from the inputs.
    pub quantities: DerivedQuantities,
    /// Per-inerton period rule for ensemble scenarios.
    pub period_rule: PeriodRule,
    /// Rest density entering the substrate mass balance.
    pub rest_density: f64,
    /// Integrator settings.
    pub integrator: IntegratorConfig,
    /// Sampling horizon in absolute time units.
    pub t_end: f64,
    /// Uniform samples per half-period for trajectory artifacts.
    pub samples_per_period: u32,
}

impl Resolved {
    /// The uniform sampling grid `t_k = k·T/samples_per_period` covering
    /// `[0, t_end]`.
    pub fn sample_grid(&self) -> Vec<f64> {
        let t_half = self.params.half_period;
        let per = f64::from(self.samples_per_period);
        let total = (self.t_end / t_half * per).round() as usize;
        (0..=total)
            .map(|k| k as f64 * t_half / per)
            .collect()
    }
}

/// Reads and resolves a configuration file.
///
/// Unreadable files are I/O failures (exit 3); anything wrong with the
/// content is a configuration error (exit 1).
pub fn load(path: &Path) -> CliResult<Resolved> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    resolve(&text)
}

/// Parses and resolves configuration text.
pub fn resolve(text: &str) -> CliResult<Resolved> {
    let file: FileConfig =
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;

    let h_closure = match (file.model.h_mode, file.model.h) {
        (HMode::Derived, None) => HClosure::Derived,
        (HMode::Given, Some(h)) => HClosure::Given(h),
        (HMode::Given, None) => {
            return Err(CliError::Config(
                "model.h is required when model.h_mode = \"given\"".into(),
            ))
        }
        (HMode::Derived, Some(_)) => {
            return Err(CliError::Config(
                "model.h is only used with model.h_mode = \"given\"; remove it or switch the mode"
                    .into(),
            ))
        }
    };

    let params = ModelParams {
        rest_mass: file.model.rest_mass,
        initial_speed: file.model.v0,
        limit_speed: file.model.c,
        half_period: file.model.half_period,
        ensemble_size: file.model.ensemble_size,
        h_closure,
    };
    let quantities = derive_quantities(&params).map_err(|e| CliError::Config(e.to_string()))?;

    let period_rule = match &file.model.per_inerton_periods {
        None => PeriodRule::UniformT,
        Some(list) => PeriodRule::PerInerton(list.clone()),
    };
    // Fail early on a malformed period list instead of inside a scenario.
    inerton_core::model::ensemble_velocities(&params, &period_rule)
        .map_err(|e| CliError::Config(e.to_string()))?;

    if !(file.model.rho0.is_finite() && file.model.rho0 > 0.0) {
        return Err(CliError::Config(format!(
            "model.rho0 must be positive and finite, got {}",
            file.model.rho0
        )));
    }

    let t_half = params.half_period;
    let defaults = IntegratorConfig::default_for(t_half);
    let integrator = IntegratorConfig {
        method: match file.integrator.method {
            MethodName::Rk4 => Method::FixedRk4,
            MethodName::Dp54 => Method::DormandPrince,
        },
        step: file.integrator.step.unwrap_or(defaults.step),
        rel_tol: file.integrator.rel_tol,
        abs_tol: file.integrator.abs_tol,
        event_mode: match file.integrator.event_mode {
            EventModeName::Scheduled => EventMode::Scheduled,
            EventModeName::Detected => EventMode::Detected,
        },
        event_tol: file.integrator.event_tol.unwrap_or(defaults.event_tol),
    };
    for (value, name) in [
        (integrator.step, "integrator.step"),
        (integrator.rel_tol, "integrator.rel_tol"),
        (integrator.abs_tol, "integrator.abs_tol"),
        (integrator.event_tol, "integrator.event_tol"),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Config(format!(
                "{name} must be positive and finite, got {value}"
            )));
        }
    }

    let grid = &file.grid;
    if !(grid.t_end.is_finite() && grid.t_end > 0.0 && grid.t_end <= 1000.0) {
        return Err(CliError::Config(format!(
            "grid.t_end must lie in (0, 1000] half-periods, got {}",
            grid.t_end
        )));
    }
    if grid.samples_per_period == 0 {
        return Err(CliError::Config(
            "grid.samples_per_period must be at least 1".into(),
        ));
    }
    let total = grid.t_end * f64::from(grid.samples_per_period);
    if (total - total.round()).abs() > 1e-6 {
        return Err(CliError::Config(format!(
            "grid.t_end * grid.samples_per_period must be a whole number of samples, got {total}"
        )));
    }
    if total.round() > 5_000_000.0 {
        return Err(CliError::Config(format!(
            "grid would hold {} samples; cap is 5000000",
            total.round()
        )));
    }

    Ok(Resolved {
        params,
        quantities,
        period_rule,
        rest_density: file.model.rho0,
        integrator,
        t_end: grid.t_end * t_half,
        samples_per_period: grid.samples_per_period,
    })
}
