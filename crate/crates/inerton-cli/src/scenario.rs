//! The five scenarios behind the subcommands: each takes a resolved
//! configuration, writes its artifacts under the output directory, and
//! returns the run summary for stdout (text or JSON).

use std::path::Path;

use serde_json::json;

use inerton_core::integrator::{integrate, EventMode, OdeState};
use inerton_core::mechanics::annotate;
use inerton_core::model::HClosure;
use inerton_core::quantization::{action_profile, de_broglie, shortened_action_closed};
use inerton_core::trajectory::{
    cloud_position, cloud_velocity, particle_position, particle_velocity, sample_trajectory,
};
use inerton_core::TrajectorySeries;

use crate::config::Resolved;
use crate::{csv, svg, verify, CliError, CliResult};

/// Stdout format of a scenario summary. Artifacts are unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// A single pretty-printed JSON object.
    Json,
}

fn write_artifact(out_dir: &Path, name: &str, content: &str) -> CliResult<String> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn closure_rule(resolved: &Resolved) -> &'static str {
    match resolved.params.h_closure {
        HClosure::Derived => "derived: h = 2*T*E",
        HClosure::Given(_) => "given verbatim",
    }
}

fn model_text(resolved: &Resolved) -> String {
    let p = &resolved.params;
    let q = &resolved.quantities;
    format!(
        "model: M0 = {}, v0 = {}, c = {}, T = {}, N = {}\n\
         derived: lambda = {}, Lambda = {}, m0 = {}, M = {}, m = {}, E = {}, nu = {}, h = {} ({})",
        p.rest_mass,
        p.initial_speed,
        p.limit_speed,
        p.half_period,
        p.ensemble_size,
        q.particle_period,
        q.cloud_period,
        q.cloud_rest_mass,
        q.particle_mass,
        q.cloud_mass,
        q.kinetic_energy,
        q.frequency,
        q.action_quantum,
        closure_rule(resolved),
    )
}

fn model_json(resolved: &Resolved) -> serde_json::Value {
    let p = &resolved.params;
    let q = &resolved.quantities;
    json!({
        "M0": p.rest_mass,
        "v0": p.initial_speed,
        "c": p.limit_speed,
        "T": p.half_period,
        "N": p.ensemble_size,
        "lambda": q.particle_period,
        "Lambda": q.cloud_period,
        "m0": q.cloud_rest_mass,
        "M": q.particle_mass,
        "m": q.cloud_mass,
        "E": q.kinetic_energy,
        "nu": q.frequency,
        "h": q.action_quantum,
        "h_rule": closure_rule(resolved),
    })
}

fn render_json(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("summary serializes");
    text.push('\n');
    text
}

fn non_evaluable_count(series: &TrajectorySeries) -> usize {
    series
        .diagnostics
        .as_ref()
        .map(|d| d.iter().filter(|x| x.interaction_lagrangian.is_none()).count())
        .unwrap_or(0)
}

/// `analytic`: closed-form trajectory on the configured grid.
pub fn run_analytic(resolved: &Resolved, out_dir: &Path, format: Format) -> CliResult<String> {
    let dq = &resolved.quantities;
    let grid = resolved.sample_grid();
    let mut series =
        sample_trajectory(&grid, dq).map_err(|e| CliError::Config(e.to_string()))?;
    annotate(&mut series, dq);
    let rows = series.samples.len();
    let skipped = non_evaluable_count(&series);
    let path = write_artifact(out_dir, "trajectory.csv", &csv::trajectory_csv(&series))?;
    let last = *series.samples.last().expect("grid is non-empty");

    Ok(match format {
        Format::Text => format!(
            "scenario: analytic\n{}\nwrote: {path} ({rows} rows)\n\
             final state at t = {}: X = {:.16e}, Xd = {:.16e}, x = {:.16e}, xd = {:.16e}\n\
             interaction Lagrangian non-evaluable at {skipped} of {rows} samples (radical < 0; NaN in the CSV)\n",
            model_text(resolved),
            last.t,
            last.particle_pos,
            last.particle_vel,
            last.cloud_pos,
            last.cloud_vel,
        ),
        Format::Json => render_json(json!({
            "scenario": "analytic",
            "model": model_json(resolved),
            "artifacts": [path],
            "rows": rows,
            "final_state": {
                "t": last.t,
                "X": last.particle_pos,
                "Xd": last.particle_vel,
                "x": last.cloud_pos,
                "xd": last.cloud_vel,
            },
            "lagrangian_non_evaluable_samples": skipped,
        })),
    })
}

/// `integrate`: numerical integration with the configured stepper, plus a
/// column-by-column error table against the closed forms.
pub fn run_integrate(resolved: &Resolved, out_dir: &Path, format: Format) -> CliResult<String> {
    let dq = &resolved.quantities;
    let run = integrate(
        &OdeState::initial(dq),
        (0.0, resolved.t_end),
        dq,
        &resolved.integrator,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let mut series = run.series;
    annotate(&mut series, dq);
    // Samples closer to a reflection than this window compare against a
    // closed form whose reflection happens at exactly t = nT, while a
    // detected event lands within event_tol of it on either side; the
    // convention gap there is O(1) in xd and says nothing about accuracy.
    // The window is counted separately; the CSV always carries raw values.
    let window = 1e-6 * dq.half_period;
    let mut worst = [0.0_f64; 4];
    let mut worst_interior = [0.0_f64; 4];
    let error_rows: Vec<(f64, [f64; 4])> = series
        .samples
        .iter()
        .map(|s| {
            let errs = [
                (s.particle_pos - particle_position(s.t, dq).expect("t in range")).abs(),
                (s.particle_vel - particle_velocity(s.t, dq).expect("t in range")).abs(),
                (s.cloud_pos - cloud_position(s.t, dq).expect("t in range")).abs(),
                (s.cloud_vel - cloud_velocity(s.t, dq).expect("t in range")).abs(),
            ];
            let ratio = s.t / dq.half_period;
            let interior = (ratio - ratio.round()).abs() * dq.half_period > window;
            for (k, e) in errs.iter().enumerate() {
                worst[k] = worst[k].max(*e);
                if interior || matches!(resolved.integrator.event_mode, EventMode::Scheduled) {
                    worst_interior[k] = worst_interior[k].max(*e);
                }
            }
            (s.t, errs)
        })
        .collect();

    let rows = series.samples.len();
    let events = run.events.len();
    let path_t = write_artifact(out_dir, "trajectory.csv", &csv::trajectory_csv(&series))?;
    let path_e = write_artifact(out_dir, "oracle_error.csv", &csv::oracle_error_csv(&error_rows))?;

    Ok(match format {
        Format::Text => format!(
            "scenario: integrate\n{}\nwrote: {path_t} ({rows} rows)\nwrote: {path_e}\n\
             reflections: {events}\n\
             worst |integrated - closed|, all samples: X {:.3e}, Xd {:.3e}, x {:.3e}, xd {:.3e}\n\
             worst |integrated - closed|, outside reflection windows: X {:.3e}, Xd {:.3e}, x {:.3e}, xd {:.3e}\n",
            model_text(resolved),
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            worst_interior[0],
            worst_interior[1],
            worst_interior[2],
            worst_interior[3],
        ),
        Format::Json => render_json(json!({
            "scenario": "integrate",
            "model": model_json(resolved),
            "artifacts": [path_t, path_e],
            "rows": rows,
            "reflections": events,
            "worst_error": {
                "X": worst[0],
                "Xd": worst[1],
                "x": worst[2],
                "xd": worst[3],
            },
            "worst_error_interior": {
                "X": worst_interior[0],
                "Xd": worst_interior[1],
                "x": worst_interior[2],
                "xd": worst_interior[3],
            },
        })),
    })
}

/// `verify`: the full check suite; artifacts are written even on failure so
/// a red run can be inspected.
pub fn run_verify(resolved: &Resolved, out_dir: &Path, format: Format) -> CliResult<String> {
    let report = verify::build_report(resolved)?;
    let text = report.render_text();
    let json_text = report.render_json();
    let path_t = write_artifact(out_dir, "verify_report.txt", &text)?;
    let path_j = write_artifact(out_dir, "verify_report.json", &json_text)?;

    if !report.passed {
        let failed = report.failed_names();
        return Err(CliError::Verification(format!(
            "{} of {} checks failed: {} (full report: {path_t})",
            failed.len(),
            report.checks.len(),
            failed.join(", "),
        )));
    }
    Ok(match format {
        Format::Text => format!("{text}wrote: {path_t}\nwrote: {path_j}\n"),
        Format::Json => json_text,
    })
}

/// `figures`: deterministic SVG plots of the trajectory and the period
/// hierarchy.
pub fn run_figures(resolved: &Resolved, out_dir: &Path, format: Format) -> CliResult<String> {
    let dq = &resolved.quantities;
    let grid = resolved.sample_grid();
    let series = sample_trajectory(&grid, dq).map_err(|e| CliError::Config(e.to_string()))?;
    let path_t = write_artifact(out_dir, "trajectories.svg", &svg::trajectory_figure(&series))?;
    let path_p = write_artifact(out_dir, "periods.svg", &svg::periods_figure(dq))?;

    Ok(match format {
        Format::Text => format!(
            "scenario: figures\n{}\nwrote: {path_t}\nwrote: {path_p}\n",
            model_text(resolved),
        ),
        Format::Json => render_json(json!({
            "scenario": "figures",
            "model": model_json(resolved),
            "artifacts": [path_t, path_p],
        })),
    })
}

/// `quantize`: action profile, quantization closure, and the de Broglie
/// pair.
pub fn run_quantize(resolved: &Resolved, out_dir: &Path, format: Format) -> CliResult<String> {
    let dq = &resolved.quantities;
    let (energy, mass, t_half) = (dq.kinetic_energy, dq.particle_mass, dq.half_period);
    let profile =
        action_profile(energy, mass, t_half, 50).map_err(|e| CliError::Config(e.to_string()))?;
    let closed: Vec<f64> = profile
        .positions
        .iter()
        .map(|&x| shortened_action_closed(x, energy, mass, t_half).expect("x within amplitude"))
        .collect();
    let relations = de_broglie(dq).map_err(|e| CliError::Config(e.to_string()))?;
    let mass_energy = mass * dq.limit_speed * dq.limit_speed;

    let path = write_artifact(
        out_dir,
        "action_profile.csv",
        &csv::action_csv(&profile.positions, &profile.shortened, &closed),
    )?;

    Ok(match format {
        Format::Text => format!(
            "scenario: quantize\n{}\nwrote: {path} ({} rows)\n\
             turning point X_max = {:.16e}\n\
             cyclic action J = {:.16e} (2*T*E = {:.16e})\n\
             action quantum h = {:.16e} ({})\n\
             de Broglie: lambda_dB = {:.16e} (lambda = {:.16e}), nu = {:.16e} (1/(2T) = {:.16e})\n\
             de Broglie residuals: wavelength {:.3e}, frequency {:.3e}\n\
             energy split: kinetic E = {:.16e}, mass energy M*c^2 = {:.16e}, ratio = {:.16e}\n",
            model_text(resolved),
            profile.positions.len(),
            profile.turning_point,
            profile.cyclic,
            2.0 * t_half * energy,
            dq.action_quantum,
            closure_rule(resolved),
            relations.wavelength,
            dq.particle_period,
            relations.frequency,
            dq.frequency,
            relations.wavelength_residual,
            relations.frequency_residual,
            energy,
            mass_energy,
            energy / mass_energy,
        ),
        Format::Json => render_json(json!({
            "scenario": "quantize",
            "model": model_json(resolved),
            "artifacts": [path],
            "turning_point": profile.turning_point,
            "cyclic_action": profile.cyclic,
            "action_quantum": dq.action_quantum,
            "de_broglie": {
                "wavelength": relations.wavelength,
                "frequency": relations.frequency,
                "wavelength_residual": relations.wavelength_residual,
                "frequency_residual": relations.frequency_residual,
            },
            "energy_split": {
                "kinetic": energy,
                "mass_energy": mass_energy,
                "ratio": energy / mass_energy,
            },
        })),
    })
}
