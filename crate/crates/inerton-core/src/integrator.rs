//! Direct integration of the coupled particle–cloud equations of motion.
//!
//! Between collisions the state `(X, Ẋ, x, ẋ)` obeys the linear system
//!
//! ```text
//! Ẍ = −(π/T)·(v0/c)·ẋ
//! ẍ = +(π/T)·(c/v0)·(Ẋ − v0)
//! ```
//!
//! At every collision `t = nT` the cloud front is reabsorbed and re-emitted:
//! the reflection map flips `ẋ ← −ẋ` while `Ẋ = v0` and `x = 0` re-assert
//! themselves. The integrator applies the map either on the known schedule
//! (`t = nT`, the default) or when it detects the front crossing `x = 0`
//! downward; in both cases the boundary discrepancies `|Ẋ − v0|` and `|x|`
//! are recorded in the event log, never clamped away.
//!
//! Two steppers are provided: the classical fixed-step 4th-order Runge–Kutta
//! rule (default step `T/1000`) and an adaptive Dormand–Prince 5(4) embedded
//! pair under relative/absolute tolerances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DerivedQuantities, EnsembleVelocities};
use crate::trajectory::{SystemState, TrajectorySeries};

/// Integration state vector `(X, Ẋ, x, ẋ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeState {
    /// Particle position `X`.
    pub particle_pos: f64,
    /// Particle velocity `Ẋ`.
    pub particle_vel: f64,
    /// Cloud front distance `x`.
    pub cloud_pos: f64,
    /// Cloud front velocity `ẋ`.
    pub cloud_vel: f64,
}

impl OdeState {
    /// Canonical post-emission initial state `(0, v0, 0, c)`.
    pub fn initial(dq: &DerivedQuantities) -> Self {
        Self {
            particle_pos: 0.0,
            particle_vel: dq.initial_speed,
            cloud_pos: 0.0,
            cloud_vel: dq.limit_speed,
        }
    }

    /// `self + h·k`, the workhorse of every Runge–Kutta stage.
    fn add_scaled(&self, k: &OdeState, h: f64) -> Self {
        Self {
            particle_pos: self.particle_pos + h * k.particle_pos,
            particle_vel: self.particle_vel + h * k.particle_vel,
            cloud_pos: self.cloud_pos + h * k.cloud_pos,
            cloud_vel: self.cloud_vel + h * k.cloud_vel,
        }
    }

    fn is_finite(&self) -> bool {
        self.particle_pos.is_finite()
            && self.particle_vel.is_finite()
            && self.cloud_pos.is_finite()
            && self.cloud_vel.is_finite()
    }

    /// View of the state as a trajectory sample at time `t`.
    pub fn at(&self, t: f64) -> SystemState {
        SystemState {
            t,
            particle_pos: self.particle_pos,
            particle_vel: self.particle_vel,
            cloud_pos: self.cloud_pos,
            cloud_vel: self.cloud_vel,
        }
    }
}

/// Stepper choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Classical fixed-step 4th-order Runge–Kutta.
    FixedRk4,
    /// Adaptive Dormand–Prince 5(4) embedded pair.
    DormandPrince,
}

/// How collision events are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventMode {
    /// Reflect on the known schedule `t = nT` (the default).
    Scheduled,
    /// Reflect where the integrated front crosses `x = 0` downward, located
    /// by bisection inside the offending step.
    Detected,
}

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Stepper choice.
    pub method: Method,
    /// Fixed step (or initial step for the adaptive pair). Blocks between
    /// events are cut into equal substeps no longer than this.
    pub step: f64,
    /// Relative tolerance of the adaptive pair.
    pub rel_tol: f64,
    /// Absolute tolerance of the adaptive pair.
    pub abs_tol: f64,
    /// Event location mode.
    pub event_mode: EventMode,
    /// Time-width target of the event bisection (detected mode).
    pub event_tol: f64,
}

impl IntegratorConfig {
    /// Defaults for a given half-period: RK4 at `T/1000`, scheduled events,
    /// bisection width `1e−12·T`, adaptive tolerances `1e−10`/`1e−12`.
    pub fn default_for(t_half: f64) -> Self {
        Self {
            method: Method::FixedRk4,
            step: t_half / 1000.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            event_mode: EventMode::Scheduled,
            event_tol: 1e-12 * t_half,
        }
    }

    fn validate(&self) -> Result<()> {
        for (value, name) in [
            (self.step, "step"),
            (self.rel_tol, "rel_tol"),
            (self.abs_tol, "abs_tol"),
            (self.event_tol, "event_tol"),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "integrator {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// One reflection event with the boundary discrepancies observed right
/// before the map was applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    /// Event time (exactly `nT` in scheduled mode, the located crossing in
    /// detected mode).
    pub t: f64,
    /// `|x|` at the event — how far the integrated front sat from 0.
    pub cloud_pos_gap: f64,
    /// `|Ẋ − v0|` at the event — how far the particle sat from `v0`.
    pub particle_vel_gap: f64,
}

/// Result of an integration run: the sampled trajectory plus the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Integration {
    /// Sampled states, one per accepted step (uniform grid for RK4).
    pub series: TrajectorySeries,
    /// Reflection events in time order.
    pub events: Vec<EventRecord>,
}

/// Coupling constants of the smooth system between events.
#[derive(Debug, Clone, Copy)]
struct Coupling {
    /// `(π/T)·(v0/c)` multiplying `ẋ` in the particle equation.
    particle: f64,
    /// `(π/T)·(c/v0)` multiplying `(Ẋ − v0)` in the cloud equation.
    cloud: f64,
    /// Restored speed `v0`.
    v0: f64,
}

impl Coupling {
    fn new(v0: f64, c: f64, t_half: f64) -> Result<Self> {
        if v0 == 0.0 {
            return Err(Error::DegenerateRest);
        }
        let omega = std::f64::consts::PI / t_half;
        Ok(Self {
            particle: omega * v0 / c,
            cloud: omega * c / v0,
            v0,
        })
    }

    fn deriv(&self, s: &OdeState) -> OdeState {
        OdeState {
            particle_pos: s.particle_vel,
            particle_vel: -self.particle * s.cloud_vel,
            cloud_pos: s.cloud_vel,
            cloud_vel: self.cloud * (s.particle_vel - self.v0),
        }
    }
}

/// Right-hand side of the coupled system,
/// `d/dt (X, Ẋ, x, ẋ) = (Ẋ, −(π/T)(v0/c)·ẋ, ẋ, (π/T)(c/v0)·(Ẋ − v0))`.
///
/// Degenerate at `v0 = 0` (the cloud equation divides by `v0`); callers use
/// the rest-state shortcut of [`integrate`] instead.
pub fn derivatives(s: &OdeState, dq: &DerivedQuantities) -> Result<OdeState> {
    let coupling = Coupling::new(dq.initial_speed, dq.limit_speed, dq.half_period)?;
    Ok(coupling.deriv(s))
}

/// Reflection map applied at a collision: `ẋ ← −ẋ`, everything else kept.
/// An exact involution: applying it twice restores the state bit-for-bit.
pub fn reflection_map(s: &OdeState) -> OdeState {
    OdeState {
        cloud_vel: -s.cloud_vel,
        ..*s
    }
}

fn rk4_step(s: &OdeState, h: f64, f: &Coupling) -> OdeState {
    let k1 = f.deriv(s);
    let k2 = f.deriv(&s.add_scaled(&k1, h / 2.0));
    let k3 = f.deriv(&s.add_scaled(&k2, h / 2.0));
    let k4 = f.deriv(&s.add_scaled(&k3, h));
    OdeState {
        particle_pos: s.particle_pos
            + h / 6.0
                * (k1.particle_pos
                    + 2.0 * k2.particle_pos
                    + 2.0 * k3.particle_pos
                    + k4.particle_pos),
        particle_vel: s.particle_vel
            + h / 6.0
                * (k1.particle_vel
                    + 2.0 * k2.particle_vel
                    + 2.0 * k3.particle_vel
                    + k4.particle_vel),
        cloud_pos: s.cloud_pos
            + h / 6.0 * (k1.cloud_pos + 2.0 * k2.cloud_pos + 2.0 * k3.cloud_pos + k4.cloud_pos),
        cloud_vel: s.cloud_vel
            + h / 6.0 * (k1.cloud_vel + 2.0 * k2.cloud_vel + 2.0 * k3.cloud_vel + k4.cloud_vel),
    }
}

/// Dormand–Prince 5(4) step: returns the 5th-order state and the embedded
/// error estimate (5th minus 4th order solution).
fn dp54_step(s: &OdeState, h: f64, f: &Coupling) -> (OdeState, OdeState) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = B1 - 5179.0 / 57600.0;
    const E3: f64 = B3 - 7571.0 / 16695.0;
    const E4: f64 = B4 - 393.0 / 640.0;
    const E5: f64 = B5 + 92097.0 / 339200.0;
    const E6: f64 = B6 - 187.0 / 2100.0;
    const E7: f64 = -1.0 / 40.0;

    let k1 = f.deriv(s);
    let k2 = f.deriv(&s.add_scaled(&k1, h * A21));
    let k3 = f.deriv(&combine(s, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = f.deriv(&combine(s, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f.deriv(&combine(s, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f.deriv(&combine(
        s,
        h,
        &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let next = combine(s, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f.deriv(&next);
    let zero = OdeState {
        particle_pos: 0.0,
        particle_vel: 0.0,
        cloud_pos: 0.0,
        cloud_vel: 0.0,
    };
    let error = combine(
        &zero,
        h,
        &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
    );
    (next, error)
}

fn combine(s: &OdeState, h: f64, terms: &[(f64, &OdeState)]) -> OdeState {
    let mut out = *s;
    for &(a, k) in terms {
        out = out.add_scaled(k, h * a);
    }
    out
}

fn boundary_snap(ratio: f64) -> f64 {
    4.0 * f64::EPSILON * ratio.abs().max(1.0)
}

/// Smallest scheduled boundary `nT` strictly greater than `t`.
fn next_boundary(t: f64, t_half: f64) -> f64 {
    let ratio = t / t_half;
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= boundary_snap(ratio) {
        nearest
    } else {
        ratio.floor()
    };
    (n + 1.0) * t_half
}

fn is_boundary(t: f64, t_half: f64) -> bool {
    let ratio = t / t_half;
    (ratio - ratio.round()).abs() <= boundary_snap(ratio)
}

struct Run<'a> {
    coupling: Coupling,
    cfg: &'a IntegratorConfig,
    samples: Vec<SystemState>,
    events: Vec<EventRecord>,
}

impl Run<'_> {
    fn fail(&self, t: f64) -> Error {
        Error::IntegrationFailed {
            t,
            reason: "state became non-finite".into(),
        }
    }

    /// Advances one substep, locating and applying front crossings by
    /// bisection when the detected event mode is active.
    fn substep(&mut self, s: OdeState, t_from: f64, t_to: f64) -> Result<OdeState> {
        let mut s_cur = s;
        let mut t_cur = t_from;
        // A substep normally holds at most one crossing; the loop guards
        // against pathological steps that straddle several.
        for _ in 0..8 {
            let h = t_to - t_cur;
            let s_next = self.one_step(&s_cur, h);
            if !s_next.is_finite() {
                return Err(self.fail(t_to));
            }
            let crossing = self.cfg.event_mode == EventMode::Detected
                && s_cur.cloud_pos > 0.0
                && s_next.cloud_pos <= 0.0
                && s_next.cloud_vel < 0.0;
            if !crossing {
                return Ok(s_next);
            }
            // Bisect the step on the sign of x to the configured width.
            let (mut lo, mut hi) = (0.0_f64, h);
            while hi - lo > self.cfg.event_tol {
                let mid = 0.5 * (lo + hi);
                if self.one_step(&s_cur, mid).cloud_pos > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s_event = self.one_step(&s_cur, hi);
            let t_event = t_cur + hi;
            self.events.push(EventRecord {
                t: t_event,
                cloud_pos_gap: s_event.cloud_pos.abs(),
                particle_vel_gap: (s_event.particle_vel - self.coupling.v0).abs(),
            });
            s_cur = reflection_map(&s_event);
            t_cur = t_event;
            if t_to - t_cur <= 0.0 {
                return Ok(s_cur);
            }
        }
        Err(Error::IntegrationFailed {
            t: t_to,
            reason: "more than 8 front crossings inside one step".into(),
        })
    }

    fn one_step(&self, s: &OdeState, h: f64) -> OdeState {
        match self.cfg.method {
            Method::FixedRk4 => rk4_step(s, h, &self.coupling),
            Method::DormandPrince => dp54_step(s, h, &self.coupling).0,
        }
    }

    /// Integrates a smooth block `[t_from, t_to]` (no scheduled boundary in
    /// the interior), emitting a sample at every step point except `t_from`.
    fn advance_block(&mut self, s: OdeState, t_from: f64, t_to: f64) -> Result<OdeState> {
        match self.cfg.method {
            Method::FixedRk4 => self.advance_fixed(s, t_from, t_to),
            Method::DormandPrince => self.advance_adaptive(s, t_from, t_to),
        }
    }

    fn advance_fixed(&mut self, mut s: OdeState, t_from: f64, t_to: f64) -> Result<OdeState> {
        let span = t_to - t_from;
        let n_steps = ((span / self.cfg.step) - 1e-9).ceil().max(1.0) as usize;
        let h = span / n_steps as f64;
        let mut t_prev = t_from;
        for k in 1..=n_steps {
            let t_next = if k == n_steps {
                t_to
            } else {
                t_from + k as f64 * h
            };
            s = self.substep(s, t_prev, t_next)?;
            t_prev = t_next;
            if k < n_steps {
                self.samples.push(s.at(t_next));
            }
        }
        Ok(s)
    }

    fn advance_adaptive(&mut self, mut s: OdeState, t_from: f64, t_to: f64) -> Result<OdeState> {
        let span = t_to - t_from;
        let min_step = span * 1e-14;
        let mut t = t_from;
        let mut h = self.cfg.step.min(span);
        while t_to - t > span * 4.0 * f64::EPSILON {
            h = h.min(t_to - t);
            let (candidate, error) = dp54_step(&s, h, &self.coupling);
            if !candidate.is_finite() {
                return Err(self.fail(t));
            }
            let err_norm = self.error_norm(&s, &candidate, &error);
            if err_norm <= 1.0 {
                let t_next = t + h;
                s = self.substep(s, t, t_next)?;
                t = t_next;
                if t_to - t > span * 4.0 * f64::EPSILON {
                    self.samples.push(s.at(t));
                }
            }
            let factor = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= factor;
            if h < min_step {
                return Err(Error::IntegrationFailed {
                    t,
                    reason: format!("adaptive step underflow (h = {h})"),
                });
            }
        }
        Ok(s)
    }

    fn error_norm(&self, s: &OdeState, next: &OdeState, error: &OdeState) -> f64 {
        let pairs = [
            (error.particle_pos, s.particle_pos, next.particle_pos),
            (error.particle_vel, s.particle_vel, next.particle_vel),
            (error.cloud_pos, s.cloud_pos, next.cloud_pos),
            (error.cloud_vel, s.cloud_vel, next.cloud_vel),
        ];
        let mut worst: f64 = 0.0;
        for (e, a, b) in pairs {
            let scale = self.cfg.abs_tol + self.cfg.rel_tol * a.abs().max(b.abs());
            worst = worst.max((e / scale).abs());
        }
        worst
    }
}

/// Integrates the coupled system over `t_span` from the state `s0`.
///
/// In scheduled event mode the run is cut at every `t = nT`, where the
/// reflection map is applied and the boundary discrepancies are recorded; in
/// detected mode reflections happen where the integrated front crosses
/// `x = 0` downward. Samples are emitted at every step point (post-event at
/// boundaries), starting with `s0` itself.
///
/// At `v0 = 0` the system is degenerate: a state already at rest is carried
/// through unchanged (constant series), anything else is rejected.
pub fn integrate(
    s0: &OdeState,
    t_span: (f64, f64),
    dq: &DerivedQuantities,
    cfg: &IntegratorConfig,
) -> Result<Integration> {
    cfg.validate()?;
    let (t0, t1) = t_span;
    if !t0.is_finite() || !t1.is_finite() || t0 < 0.0 || t1 <= t0 {
        return Err(Error::InvalidParameter(format!(
            "t_span must satisfy 0 <= t0 < t1, got ({t0}, {t1})"
        )));
    }
    if t1 > 1000.0 * dq.half_period {
        return Err(Error::InvalidParameter(format!(
            "t_span end {t1} exceeds the supported horizon of 1000 half-periods"
        )));
    }
    if !s0.is_finite() {
        return Err(Error::InvalidParameter(
            "initial state must be finite".into(),
        ));
    }

    if dq.initial_speed == 0.0 {
        if s0.particle_vel != 0.0 || s0.cloud_vel != 0.0 {
            return Err(Error::DegenerateRest);
        }
        // Rest-state shortcut: nothing moves, emit the constant state on the
        // same grid the stepper would have used.
        let mut samples = vec![s0.at(t0)];
        let span = t1 - t0;
        let n_steps = ((span / cfg.step) - 1e-9).ceil().max(1.0) as usize;
        let h = span / n_steps as f64;
        for k in 1..=n_steps {
            let t = if k == n_steps { t1 } else { t0 + k as f64 * h };
            samples.push(s0.at(t));
        }
        return Ok(Integration {
            series: TrajectorySeries::new(samples),
            events: Vec::new(),
        });
    }

    let coupling = Coupling::new(dq.initial_speed, dq.limit_speed, dq.half_period)?;
    let mut run = Run {
        coupling,
        cfg,
        samples: vec![s0.at(t0)],
        events: Vec::new(),
    };
    let mut s = *s0;
    let mut t = t0;
    let t_half = dq.half_period;
    while t1 - t > 4.0 * f64::EPSILON * t1.abs().max(1.0) {
        let block_end = next_boundary(t, t_half).min(t1);
        s = run.advance_block(s, t, block_end)?;
        t = block_end;
        if cfg.event_mode == EventMode::Scheduled && is_boundary(t, t_half) {
            run.events.push(EventRecord {
                t,
                cloud_pos_gap: s.cloud_pos.abs(),
                particle_vel_gap: (s.particle_vel - dq.initial_speed).abs(),
            });
            s = reflection_map(&s);
        }
        run.samples.push(s.at(t));
    }
    Ok(Integration {
        series: TrajectorySeries::new(run.samples),
        events: run.events,
    })
}

/// Integrates the `r`-th inerton's system over its single flight period
/// `[0, T_r]` from the emission state `(0, v0r, 0, c)`.
///
/// The flight contains no interior collision, so no reflection is applied;
/// the result is directly comparable with the single-period closed forms.
pub fn integrate_inerton(
    r: usize,
    ensemble: &EnsembleVelocities,
    limit_speed: f64,
    cfg: &IntegratorConfig,
) -> Result<Integration> {
    cfg.validate()?;
    let n = ensemble.emission_speeds.len();
    if r >= n {
        return Err(Error::InvalidParameter(format!(
            "inerton index r = {r} exceeds the ensemble size N = {n}"
        )));
    }
    let v0r = ensemble.emission_speeds[r];
    if v0r == 0.0 {
        return Err(Error::DegenerateRest);
    }
    let t_half = ensemble.half_periods[r];
    let coupling = Coupling::new(v0r, limit_speed, t_half)?;
    let s0 = OdeState {
        particle_pos: 0.0,
        particle_vel: v0r,
        cloud_pos: 0.0,
        cloud_vel: limit_speed,
    };
    // Force a smooth single-period run whatever the configured event mode:
    // reabsorption happens exactly at T_r, the end of the span, so a detected
    // crossing there would be a spurious reflection.
    let smooth_cfg = IntegratorConfig {
        event_mode: EventMode::Scheduled,
        ..*cfg
    };
    let mut run = Run {
        coupling,
        cfg: &smooth_cfg,
        samples: vec![s0.at(0.0)],
        events: Vec::new(),
    };
    let s_end = run.advance_block(s0, 0.0, t_half)?;
    run.samples.push(s_end.at(t_half));
    Ok(Integration {
        series: TrajectorySeries::new(run.samples),
        events: run.events,
    })
}

/// Default guard half-width (relative to `T`) around the cusps of the closed
/// forms inside which [`analytic_residual`] refuses to evaluate.
pub const CUSP_GUARD: f64 = 1e-9;

/// Residuals of the closed-form trajectory substituted into the equations of
/// motion:
///
/// ```text
/// r1 = Ẍ + (π/T)·(v0/c)·ẋ
/// r2 = ẍ − (π/T)·(c/v0)·(Ẋ − v0)
/// ```
///
/// Both vanish identically; the numerical values quantify round-off only.
/// Times within `1e−9·T` of a cusp of the piecewise forms (multiples of
/// `T/2`) are rejected.
pub fn analytic_residual(t: f64, dq: &DerivedQuantities) -> Result<(f64, f64)> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if dq.initial_speed == 0.0 {
        return Err(Error::DegenerateRest);
    }
    let t_half = dq.half_period;
    let half = t_half / 2.0;
    let distance = (t / half - (t / half).round()).abs() * half;
    let tol = CUSP_GUARD * t_half;
    if distance < tol {
        return Err(Error::CuspAdjacent { t, tol });
    }
    let ratio = t / t_half;
    let n = ratio.floor();
    let u = ratio - n;
    let omega = std::f64::consts::PI / t_half;
    let (sin_u, cos_u) = (std::f64::consts::PI * u).sin_cos();
    let v0 = dq.initial_speed;
    let c = dq.limit_speed;
    // Closed forms through the reduced phase: Ẋ − v0 = −v0·sin(πu),
    // ẋ = c·cos(πu), Ẍ = −v0·(π/T)·cos(πu), ẍ = −c·(π/T)·sin(πu).
    let particle_acc = -v0 * omega * cos_u;
    let cloud_acc = -c * omega * sin_u;
    let r1 = particle_acc + omega * (v0 / c) * (c * cos_u);
    let r2 = cloud_acc - omega * (c / v0) * (-v0 * sin_u);
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_quantities, ensemble_velocities, ModelParams, PeriodRule};

    fn canonical_dq() -> DerivedQuantities {
        derive_quantities(&ModelParams::canonical()).unwrap()
    }

    #[test]
    fn config_validation() {
        let dq = canonical_dq();
        let mut cfg = IntegratorConfig::default_for(1.0);
        cfg.step = 0.0;
        assert!(integrate(&OdeState::initial(&dq), (0.0, 1.0), &dq, &cfg).is_err());
        let mut cfg = IntegratorConfig::default_for(1.0);
        cfg.rel_tol = -1.0;
        assert!(integrate(&OdeState::initial(&dq), (0.0, 1.0), &dq, &cfg).is_err());
    }

    #[test]
    fn span_validation() {
        let dq = canonical_dq();
        let cfg = IntegratorConfig::default_for(1.0);
        let s0 = OdeState::initial(&dq);
        assert!(integrate(&s0, (0.5, 0.5), &dq, &cfg).is_err());
        assert!(integrate(&s0, (-1.0, 1.0), &dq, &cfg).is_err());
        assert!(integrate(&s0, (0.0, 2000.0), &dq, &cfg).is_err());
    }

    #[test]
    fn derivatives_match_hand_values() {
        let dq = canonical_dq();
        let d = derivatives(&OdeState::initial(&dq), &dq).unwrap();
        assert_eq!(d.particle_pos, 0.6);
        assert!((d.particle_vel - (-std::f64::consts::PI * 0.6)).abs() < 1e-15);
        assert_eq!(d.cloud_pos, 1.0);
        assert_eq!(d.cloud_vel, 0.0);
    }

    #[test]
    fn derivatives_reject_rest() {
        let mut params = ModelParams::canonical();
        params.initial_speed = 0.0;
        let dq = derive_quantities(&params).unwrap();
        let s = OdeState {
            particle_pos: 0.0,
            particle_vel: 0.0,
            cloud_pos: 0.0,
            cloud_vel: 0.0,
        };
        assert!(matches!(derivatives(&s, &dq), Err(Error::DegenerateRest)));
    }

    #[test]
    fn reflection_is_an_involution() {
        let s = OdeState {
            particle_pos: 0.25,
            particle_vel: 0.11,
            cloud_pos: 0.07,
            cloud_vel: -0.93,
        };
        let twice = reflection_map(&reflection_map(&s));
        assert_eq!(s.cloud_vel.to_bits(), twice.cloud_vel.to_bits());
        assert_eq!(s, twice);
    }

    #[test]
    fn rest_state_shortcut_returns_constant_series() {
        let mut params = ModelParams::canonical();
        params.initial_speed = 0.0;
        let dq = derive_quantities(&params).unwrap();
        let cfg = IntegratorConfig::default_for(1.0);
        let s0 = OdeState {
            particle_pos: 0.0,
            particle_vel: 0.0,
            cloud_pos: 0.0,
            cloud_vel: 0.0,
        };
        let run = integrate(&s0, (0.0, 2.0), &dq, &cfg).unwrap();
        assert!(run.events.is_empty());
        assert!(run
            .series
            .samples
            .iter()
            .all(|s| s.particle_pos == 0.0 && s.cloud_vel == 0.0));
        // A moving initial state has no rest dynamics to follow.
        let moving = OdeState {
            particle_vel: 0.1,
            ..s0
        };
        assert!(matches!(
            integrate(&moving, (0.0, 2.0), &dq, &cfg),
            Err(Error::DegenerateRest)
        ));
    }

    #[test]
    fn scheduled_events_land_on_boundaries() {
        let dq = canonical_dq();
        let cfg = IntegratorConfig::default_for(dq.half_period);
        let run = integrate(&OdeState::initial(&dq), (0.0, 3.0), &dq, &cfg).unwrap();
        let times: Vec<f64> = run.events.iter().map(|e| e.t).collect();
        assert_eq!(times, vec![1.0, 2.0, 3.0]);
        for e in &run.events {
            assert!(e.cloud_pos_gap < 1e-9);
            assert!(e.particle_vel_gap < 1e-9);
        }
    }

    #[test]
    fn sample_count_matches_step_grid() {
        let dq = canonical_dq();
        let cfg = IntegratorConfig::default_for(dq.half_period);
        let run = integrate(&OdeState::initial(&dq), (0.0, 10.0), &dq, &cfg).unwrap();
        assert_eq!(run.series.samples.len(), 10_001);
        assert_eq!(run.series.samples[0].t, 0.0);
        assert_eq!(run.series.samples[10_000].t, 10.0);
    }

    #[test]
    fn inerton_runs_have_no_events() {
        let params = ModelParams::canonical();
        let ens = ensemble_velocities(&params, &PeriodRule::UniformT).unwrap();
        let cfg = IntegratorConfig::default_for(1.0);
        let run = integrate_inerton(2, &ens, 1.0, &cfg).unwrap();
        assert!(run.events.is_empty());
        assert_eq!(run.series.samples.last().unwrap().t, 1.0);
        assert!(integrate_inerton(5, &ens, 1.0, &cfg).is_err());
    }

    #[test]
    fn residual_guard_rejects_cusp_neighbourhood() {
        let dq = canonical_dq();
        assert!(matches!(
            analytic_residual(1.0, &dq),
            Err(Error::CuspAdjacent { .. })
        ));
        assert!(matches!(
            analytic_residual(0.5 + 1e-12, &dq),
            Err(Error::CuspAdjacent { .. })
        ));
        assert!(analytic_residual(0.25, &dq).is_ok());
    }
}
