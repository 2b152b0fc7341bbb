//! Integrator checks: agreement with the closed forms at tight tolerance,
//! fourth-order convergence, scheduled-versus-detected event agreement, the
//! adaptive pair, the energy-like step invariant, per-inerton runs, and the
//! equation-of-motion residuals of the closed forms.

use inerton_core::integrator::{
    analytic_residual, integrate, integrate_inerton, EventMode, IntegratorConfig, Method,
    OdeState, CUSP_GUARD,
};
use inerton_core::model::{derive_quantities, ensemble_velocities, ModelParams, PeriodRule};
use inerton_core::trajectory::{
    cloud_position, cloud_velocity, inerton_period_solution, particle_position, particle_velocity,
};
use inerton_core::{DerivedQuantities, Error, SystemState};

fn canonical() -> DerivedQuantities {
    derive_quantities(&ModelParams::canonical()).unwrap()
}

/// Largest deviation of an integrated sample set from the closed forms,
/// measured across all four state components.
fn max_error_vs_closed_forms(samples: &[SystemState], dq: &DerivedQuantities) -> f64 {
    let mut worst: f64 = 0.0;
    for s in samples {
        let t = s.t;
        worst = worst.max((s.particle_pos - particle_position(t, dq).unwrap()).abs());
        worst = worst.max((s.particle_vel - particle_velocity(t, dq).unwrap()).abs());
        worst = worst.max((s.cloud_pos - cloud_position(t, dq).unwrap()).abs());
        worst = worst.max((s.cloud_vel - cloud_velocity(t, dq).unwrap()).abs());
    }
    worst
}

fn rk4_config(dq: &DerivedQuantities, steps_per_period: f64) -> IntegratorConfig {
    IntegratorConfig {
        method: Method::FixedRk4,
        step: dq.half_period / steps_per_period,
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        event_mode: EventMode::Scheduled,
        event_tol: 1e-12 * dq.half_period,
    }
}

#[test]
fn rk4_tracks_the_closed_forms_over_ten_periods() {
    let dq = canonical();
    let cfg = rk4_config(&dq, 1000.0);
    let run = integrate(&OdeState::initial(&dq), (0.0, 10.0 * dq.half_period), &dq, &cfg).unwrap();
    assert_eq!(run.series.samples.len(), 10_001);
    assert_eq!(run.events.len(), 10);
    let err = max_error_vs_closed_forms(&run.series.samples, &dq);
    assert!(
        err <= 1e-7,
        "RK4 at T/1000 drifted {err:.3e} from the closed forms"
    );
}

#[test]
fn rk4_converges_at_fourth_order() {
    let dq = canonical();
    let span = (0.0, 10.0 * dq.half_period);
    let coarse = integrate(
        &OdeState::initial(&dq),
        span,
        &dq,
        &rk4_config(&dq, 500.0),
    )
    .unwrap();
    let fine = integrate(
        &OdeState::initial(&dq),
        span,
        &dq,
        &rk4_config(&dq, 1000.0),
    )
    .unwrap();
    let err_coarse = max_error_vs_closed_forms(&coarse.series.samples, &dq);
    let err_fine = max_error_vs_closed_forms(&fine.series.samples, &dq);
    let ratio = err_coarse / err_fine;
    assert!(
        (12.0..=20.0).contains(&ratio),
        "halving the step should cut the error ~16x, got {ratio:.3} \
         ({err_coarse:.3e} -> {err_fine:.3e})"
    );
}

#[test]
fn scheduled_events_sit_exactly_on_the_grid() {
    let dq = canonical();
    let cfg = rk4_config(&dq, 1000.0);
    let run = integrate(&OdeState::initial(&dq), (0.0, 5.0), &dq, &cfg).unwrap();
    assert_eq!(run.events.len(), 5);
    for (n, event) in run.events.iter().enumerate() {
        assert_eq!(event.t, (n + 1) as f64 * dq.half_period);
        assert!(
            event.cloud_pos_gap <= 1e-9,
            "front missed the particle by {:.3e} at event {n}",
            event.cloud_pos_gap
        );
        assert!(
            event.particle_vel_gap <= 1e-9,
            "particle speed missed v0 by {:.3e} at event {n}",
            event.particle_vel_gap
        );
    }
}

#[test]
fn detected_events_agree_with_the_schedule() {
    let dq = canonical();
    let mut cfg = rk4_config(&dq, 1000.0);
    cfg.event_mode = EventMode::Detected;
    // End mid-period so the tenth crossing is safely interior to the span.
    let run = integrate(&OdeState::initial(&dq), (0.0, 10.5), &dq, &cfg).unwrap();
    assert_eq!(run.events.len(), 10, "one reflection per period expected");
    for (n, event) in run.events.iter().enumerate() {
        let scheduled = (n + 1) as f64 * dq.half_period;
        assert!(
            (event.t - scheduled).abs() <= 1e-9 * dq.half_period,
            "detected crossing {n} at t={:.17e}, schedule says {scheduled:.17e}",
            event.t
        );
    }
    // Samples exactly on a boundary may precede the located crossing by a
    // few 1e-13·T and then legitimately carry the pre-reflection front
    // velocity −c; compare against the closed forms away from them.
    let interior: Vec<SystemState> = run
        .series
        .samples
        .iter()
        .copied()
        .filter(|s| {
            let u = s.t / dq.half_period;
            (u - u.round()).abs() > 1e-6
        })
        .collect();
    assert!(interior.len() > 10_000);
    let err = max_error_vs_closed_forms(&interior, &dq);
    assert!(
        err <= 1e-6,
        "detected-mode run drifted {err:.3e} from the closed forms"
    );
}

#[test]
fn adaptive_pair_tracks_the_closed_forms() {
    let dq = canonical();
    let cfg = IntegratorConfig {
        method: Method::DormandPrince,
        step: dq.half_period / 100.0,
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        event_mode: EventMode::Scheduled,
        event_tol: 1e-12 * dq.half_period,
    };
    let run = integrate(&OdeState::initial(&dq), (0.0, 4.0 * dq.half_period), &dq, &cfg).unwrap();
    assert_eq!(run.events.len(), 4);
    let err = max_error_vs_closed_forms(&run.series.samples, &dq);
    assert!(
        err <= 1e-7,
        "adaptive pair drifted {err:.3e} from the closed forms"
    );
}

#[test]
fn step_invariant_is_preserved_across_reflections() {
    // The smooth system conserves (Ẋ/v0 − 1)² + (ẋ/c)², and the reflection
    // map only flips the sign of ẋ, so the invariant must hold through the
    // whole run.
    let dq = canonical();
    let cfg = rk4_config(&dq, 1000.0);
    let run = integrate(&OdeState::initial(&dq), (0.0, 10.0), &dq, &cfg).unwrap();
    for s in &run.series.samples {
        let u = s.particle_vel / dq.initial_speed - 1.0;
        let w = s.cloud_vel / dq.limit_speed;
        let invariant = u * u + w * w;
        assert!(
            (invariant - 1.0).abs() <= 1e-9,
            "invariant drifted to {invariant:.17e} at t={}",
            s.t
        );
    }
}

#[test]
fn per_inerton_runs_match_their_closed_forms() {
    let params = ModelParams::canonical();
    let ensemble = ensemble_velocities(&params, &PeriodRule::UniformT).unwrap();
    for r in 0..4 {
        let cfg = IntegratorConfig {
            method: Method::FixedRk4,
            step: ensemble.half_periods[r] / 1000.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            event_mode: EventMode::Scheduled,
            event_tol: 1e-12,
        };
        let run = integrate_inerton(r, &ensemble, 1.0, &cfg).unwrap();
        assert!(run.events.is_empty(), "a single flight has no reflection");
        let mut worst: f64 = 0.0;
        for s in &run.series.samples {
            let closed = inerton_period_solution(r, s.t, &ensemble, 1.0).unwrap();
            worst = worst.max((s.particle_pos - closed.particle_pos).abs());
            worst = worst.max((s.particle_vel - closed.particle_vel).abs());
            worst = worst.max((s.cloud_pos - closed.transverse_pos).abs());
            worst = worst.max((s.cloud_vel - closed.transverse_vel).abs());
        }
        assert!(
            worst <= 1e-7,
            "inerton {r} ODE run drifted {worst:.3e} from its closed form"
        );
    }
}

#[test]
fn closed_forms_satisfy_the_equations_of_motion() {
    let dq = canonical();
    for k in 0..1000 {
        let t = 0.0137 + 9.97 * k as f64 / 1000.0;
        let (r1, r2) = match analytic_residual(t, &dq) {
            Ok(pair) => pair,
            Err(Error::CuspAdjacent { .. }) => continue,
            Err(other) => panic!("unexpected error at t={t}: {other}"),
        };
        assert!(
            r1.abs() <= 1e-12 && r2.abs() <= 1e-12,
            "equation residuals ({r1:.3e}, {r2:.3e}) at t={t}"
        );
    }
}

#[test]
fn residuals_refuse_to_evaluate_on_a_cusp() {
    let dq = canonical();
    for t in [1.0, 2.0, 3.0, 0.5, 1.5] {
        assert!(
            matches!(
                analytic_residual(t, &dq),
                Err(Error::CuspAdjacent { .. })
            ),
            "t={t} sits on a cusp and must be rejected"
        );
    }
    let guard = CUSP_GUARD * dq.half_period;
    assert!(analytic_residual(1.0 + 2.0 * guard, &dq).is_ok());
    assert!(analytic_residual(1.0 - 2.0 * guard, &dq).is_ok());
}

#[test]
fn rest_input_is_handled_explicitly() {
    let mut params = ModelParams::canonical();
    params.initial_speed = 0.0;
    let dq = derive_quantities(&params).unwrap();
    let cfg = IntegratorConfig::default_for(1.0);

    let resting = OdeState {
        particle_pos: 0.0,
        particle_vel: 0.0,
        cloud_pos: 0.0,
        cloud_vel: 0.0,
    };
    let run = integrate(&resting, (0.0, 3.0), &dq, &cfg).unwrap();
    assert!(run.events.is_empty());
    assert!(run
        .series
        .samples
        .iter()
        .all(|s| s.particle_pos == 0.0 && s.cloud_pos == 0.0));

    let moving = OdeState {
        particle_vel: 0.3,
        ..resting
    };
    assert!(matches!(
        integrate(&moving, (0.0, 3.0), &dq, &cfg),
        Err(Error::DegenerateRest)
    ));
}
