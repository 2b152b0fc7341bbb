//! Numerical laboratory for a relativistic point particle dressed by a cloud
//! of inertons — massive excitations the particle periodically emits into and
//! reabsorbs from the surrounding space substrate.
//!
//! The model couples two degrees of freedom: the particle centre of inertia
//! `X(t)` and the cloud front `x(t)` (distance from the particle to the
//! farthest inerton). Between collisions with the cloud the pair obeys a
//! linear system,
//!
//! ```text
//! Ẍ + (π/T)·(v0/c)·ẋ = 0
//! ẍ − (π/T)·(c/v0)·(Ẋ − v0) = 0
//! ```
//!
//! whose solution oscillates with half-period `T`: the particle speed drops
//! from `v0` to zero and recovers, `Ẋ(t) = v0·(1 − |sin(πt/T)|)`, while the
//! cloud breathes between `0` and `Λ/π` with `Λ = cT`. The spatial period of
//! the particle is `λ = v0·T`, the amplitude of the cloud is set by `Λ`.
//!
//! The crate provides:
//!
//! * [`model`] — parameter sets, derived quantities (`λ`, `Λ`, masses,
//!   kinetic energy, action quantum), the velocity ensemble of individual
//!   inertons, and the relativistic mass / density / volume identities;
//! * [`trajectory`] — closed-form trajectories for the particle, the cloud,
//!   and single inerton periods, plus grid sampling;
//! * [`integrator`] — fixed-step and adaptive integration of the coupled
//!   system with reflection events at `t = nT`, and residual checks of the
//!   closed forms against the equations of motion;
//! * [`mechanics`] — Lagrangian and Hamiltonian evaluators, the canonical
//!   cloud-velocity transform, momenta, and energy-conservation scans;
//! * [`quantization`] — shortened and cyclic action integrals, de Broglie
//!   relations, the plane-wave function and its wave-equation residuals;
//! * [`quadrature`] — the adaptive Gauss–Kronrod rule backing the action
//!   integrals.
//!
//! All formulas carry the limit speed `c` explicitly, so any coherent unit
//! system works; the canonical configuration uses natural units
//! (`M0 = c = T = 1`, `v0 = 0.6`).

pub mod error;
pub mod integrator;
pub mod mechanics;
pub mod model;
pub mod quadrature;
pub mod quantization;
pub mod trajectory;

pub use error::{Error, Result};
pub use model::{DerivedQuantities, EnsembleVelocities, HClosure, HydroParams, ModelParams};
pub use trajectory::{InertonPeriodState, SystemState, TrajectorySeries};
