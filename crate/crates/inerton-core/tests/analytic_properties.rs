//! Closed-form trajectory checks: reference values frozen from a 50-digit
//! evaluation, structural properties (bounds, continuity, exact boundary
//! values, drift), finite-difference consistency between positions and
//! velocities, and the per-inerton single-period solution.

use inerton_core::model::{derive_quantities, ensemble_velocities, ModelParams, PeriodRule};
use inerton_core::trajectory::{
    cloud_position, cloud_position_sided, cloud_velocity, cloud_velocity_sided,
    inerton_period_solution, oscillator_position, particle_position, particle_position_sided,
    particle_velocity, particle_velocity_sided, Branch,
};
use inerton_core::{quadrature, DerivedQuantities};
use proptest::prelude::*;

fn canonical() -> DerivedQuantities {
    derive_quantities(&ModelParams::canonical()).unwrap()
}

fn assert_rel(value: f64, expected: f64, rel: f64, what: &str) {
    let scale = expected.abs().max(f64::MIN_POSITIVE);
    assert!(
        (value - expected).abs() <= rel * scale,
        "{what}: got {value:.17e}, expected {expected:.17e} (rel tol {rel:e})"
    );
}

#[test]
fn closed_forms_match_reference_values() {
    let dq = canonical();
    assert_rel(
        particle_velocity(0.25, &dq).unwrap(),
        0.1757359312880715,
        1e-14,
        "Xdot(T/4)",
    );
    assert_rel(
        particle_position(0.5, &dq).unwrap(),
        0.1090140682897256,
        1e-13,
        "X(T/2)",
    );
    assert_rel(
        particle_position(1.0, &dq).unwrap(),
        0.2180281365794512,
        1e-13,
        "X(T)",
    );
    assert_rel(
        particle_position(2.0, &dq).unwrap(),
        0.4360562731589024,
        1e-13,
        "X(2T)",
    );
    assert_rel(
        cloud_position(0.5, &dq).unwrap(),
        std::f64::consts::FRAC_1_PI,
        1e-14,
        "x(T/2) = Lambda/pi",
    );
    assert_eq!(cloud_velocity(0.0, &dq).unwrap(), 1.0);
    assert_eq!(particle_velocity(0.0, &dq).unwrap(), 0.6);
    assert_eq!(particle_position(0.0, &dq).unwrap(), 0.0);
    assert_eq!(cloud_position(0.0, &dq).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    /// Pointwise bounds over many periods: `0 ≤ Ẋ ≤ v0`, `0 ≤ x ≤ Λ/π`,
    /// `|ẋ| ≤ c`.
    #[test]
    fn closed_forms_stay_in_their_ranges(t in 0.0_f64..50.0) {
        let dq = canonical();
        let vel = particle_velocity(t, &dq).unwrap();
        prop_assert!((0.0..=dq.initial_speed).contains(&vel));
        let front = cloud_position(t, &dq).unwrap();
        let amplitude = dq.cloud_period / std::f64::consts::PI;
        prop_assert!(front >= 0.0 && front <= amplitude * (1.0 + 4.0 * f64::EPSILON));
        let front_vel = cloud_velocity(t, &dq).unwrap();
        prop_assert!(front_vel.abs() <= dq.limit_speed);
    }

    /// The particle never backs up: `X` is non-decreasing.
    #[test]
    fn particle_position_is_monotone(t in 0.0_f64..50.0, dt in 1e-6_f64..1.0) {
        let dq = canonical();
        let a = particle_position(t, &dq).unwrap();
        let b = particle_position(t + dt, &dq).unwrap();
        prop_assert!(b >= a - 1e-15 * b.abs().max(1.0));
    }
}

#[test]
fn boundary_values_are_exact_over_many_periods() {
    let dq = canonical();
    for n in 0..=50_u32 {
        let t = f64::from(n) * dq.half_period;
        assert_eq!(
            particle_velocity(t, &dq).unwrap(),
            dq.initial_speed,
            "Xdot({n}T) must equal v0 exactly"
        );
        assert_eq!(
            cloud_position(t, &dq).unwrap(),
            0.0,
            "x({n}T) must vanish exactly"
        );
        assert_eq!(
            cloud_velocity(t, &dq).unwrap(),
            dq.limit_speed,
            "xdot({n}T) must restart at +c"
        );
    }
}

#[test]
fn sided_evaluation_is_continuous_where_it_should_be() {
    let dq = canonical();
    for n in 1..=20_u32 {
        let t = f64::from(n) * dq.half_period;
        let left = particle_position_sided(t, &dq, Branch::Left).unwrap();
        let right = particle_position_sided(t, &dq, Branch::Right).unwrap();
        assert!(
            (left - right).abs() <= 1e-12 * right.abs().max(1.0),
            "X jumps at {n}T: {left:.17e} vs {right:.17e}"
        );
        let left = particle_velocity_sided(t, &dq, Branch::Left).unwrap();
        let right = particle_velocity_sided(t, &dq, Branch::Right).unwrap();
        assert!((left - right).abs() <= 1e-12);
        let left = cloud_position_sided(t, &dq, Branch::Left).unwrap();
        let right = cloud_position_sided(t, &dq, Branch::Right).unwrap();
        assert!((left - right).abs() <= 1e-12 * dq.cloud_period);
        // The front velocity is the one discontinuous signal: −c from the
        // left, +c from the right (the reflection).
        let left = cloud_velocity_sided(t, &dq, Branch::Left).unwrap();
        let right = cloud_velocity_sided(t, &dq, Branch::Right).unwrap();
        assert_eq!(left, -dq.limit_speed);
        assert_eq!(right, dq.limit_speed);
    }
}

#[test]
fn drift_speed_matches_the_closed_coefficient() {
    let dq = canonical();
    let expected_per_period = 0.2180281365794512; // v0·T·(1 − 2/π)
    for periods in [1_u32, 2, 7, 40] {
        let t = f64::from(periods) * dq.half_period;
        let x = particle_position(t, &dq).unwrap();
        assert_rel(
            x / f64::from(periods),
            expected_per_period,
            1e-10,
            "drift per period",
        );
    }
}

#[test]
fn displacement_per_period_agrees_with_quadrature_of_the_velocity() {
    let dq = canonical();
    let moved = particle_position(dq.half_period, &dq).unwrap();
    let integrated = quadrature::integral(
        |t| particle_velocity(t, &dq).unwrap(),
        0.0,
        dq.half_period,
        1e-13,
        1e-15,
    )
    .unwrap();
    assert_rel(
        integrated.value,
        moved,
        1e-12,
        "∫Xdot dt over one period vs X(T)",
    );
}

#[test]
fn velocities_are_the_derivatives_of_the_positions() {
    let dq = canonical();
    let h = 1e-4 * dq.half_period;
    // Generic times away from the cusps at multiples of T.
    for &t in &[0.131, 0.377, 0.5, 0.733, 1.341, 2.682, 7.459] {
        let x_plus = particle_position(t + h, &dq).unwrap();
        let x_minus = particle_position(t - h, &dq).unwrap();
        let fd = (x_plus - x_minus) / (2.0 * h);
        let vel = particle_velocity(t, &dq).unwrap();
        assert!(
            (fd - vel).abs() <= 1e-6,
            "particle FD mismatch at t={t}: {fd:.17e} vs {vel:.17e}"
        );

        let f_plus = cloud_position(t + h, &dq).unwrap();
        let f_minus = cloud_position(t - h, &dq).unwrap();
        let fd = (f_plus - f_minus) / (2.0 * h);
        let vel = cloud_velocity(t, &dq).unwrap();
        assert!(
            (fd - vel).abs() <= 1e-6,
            "front FD mismatch at t={t}: {fd:.17e} vs {vel:.17e}"
        );
    }
}

#[test]
fn inerton_solution_reference_values() {
    let params = ModelParams::canonical();
    let ensemble = ensemble_velocities(&params, &PeriodRule::UniformT).unwrap();

    let emitted = inerton_period_solution(0, 0.0, &ensemble, 1.0).unwrap();
    assert_eq!(emitted.transverse_pos, 0.0);
    assert_eq!(emitted.transverse_vel, 1.0);
    assert_eq!(emitted.particle_vel, 0.6);
    assert_rel(
        emitted.longitudinal_vel,
        0.2864788975654116,
        1e-14,
        "xdot_parallel = 3*v00/(2*pi)",
    );

    let apex = inerton_period_solution(0, 0.5, &ensemble, 1.0).unwrap();
    assert_rel(
        apex.transverse_pos,
        std::f64::consts::FRAC_1_PI,
        1e-14,
        "x_perp apex = Lambda/pi",
    );
    assert!(apex.transverse_vel.abs() <= 1e-15);

    let back = inerton_period_solution(0, 1.0, &ensemble, 1.0).unwrap();
    assert!(back.transverse_pos.abs() <= 1e-15, "reabsorbed at the particle");
    assert_eq!(back.transverse_vel, -1.0, "arrives head-on at −c");

    // Longitudinal speed is constant over the flight and scales with v0r.
    for r in 0..4 {
        let early = inerton_period_solution(r, 0.1, &ensemble, 1.0).unwrap();
        let late = inerton_period_solution(r, 0.9, &ensemble, 1.0).unwrap();
        assert_eq!(early.longitudinal_vel, late.longitudinal_vel);
        assert_rel(
            early.longitudinal_vel,
            3.0 * ensemble.emission_speeds[r] / (2.0 * std::f64::consts::PI),
            1e-15,
            "xdot_parallel invariant",
        );
    }
}

#[test]
fn inerton_transverse_velocity_is_the_derivative_of_the_excursion() {
    let params = ModelParams::canonical();
    let ensemble = ensemble_velocities(&params, &PeriodRule::UniformT).unwrap();
    let h = 1e-4;
    for r in 0..4 {
        for &t in &[0.2, 0.5, 0.8] {
            let plus = inerton_period_solution(r, t + h, &ensemble, 1.0).unwrap();
            let minus = inerton_period_solution(r, t - h, &ensemble, 1.0).unwrap();
            let fd = (plus.transverse_pos - minus.transverse_pos) / (2.0 * h);
            let vel = inerton_period_solution(r, t, &ensemble, 1.0)
                .unwrap()
                .transverse_vel;
            assert!(
                (fd - vel).abs() <= 1e-6,
                "inerton {r} FD mismatch at t={t}"
            );
        }
    }
}

#[test]
fn oscillator_amplitude_equals_the_spatial_period_over_pi() {
    let dq = canonical();
    let apex = oscillator_position(
        dq.half_period / 2.0,
        dq.kinetic_energy,
        dq.particle_mass,
        dq.half_period,
    )
    .unwrap();
    assert_rel(apex, 0.1909859317102744, 1e-14, "oscillator amplitude");
    let lambda_over_pi = dq.particle_period / std::f64::consts::PI;
    assert!(
        (apex - lambda_over_pi).abs() <= 1e-12,
        "amplitude must equal lambda/pi: {apex:.17e} vs {lambda_over_pi:.17e}"
    );
}
