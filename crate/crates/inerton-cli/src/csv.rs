//! CSV artifacts with a pinned byte format.
//!
//! Every numeric field is written as `{:.16e}` — 17 significant digits of
//! scientific notation (`0.0000000000000000e0`, `2.1800000000000002e-1`),
//! which round-trips any finite `f64` exactly and never depends on locale or
//! platform. Lines end with `\n`. A Lagrangian that is non-evaluable at a
//! sample (negative radical) is recorded as `NaN`.

use std::fmt::Write as _;

use inerton_core::TrajectorySeries;

/// Header of trajectory tables.
pub const TRAJECTORY_HEADER: &str = "t,X,Xdot,x,xdot,H_eff,L17,radical";

/// Header of integration-versus-closed-form error tables.
pub const ORACLE_ERROR_HEADER: &str = "t,err_X,err_Xdot,err_x,err_xdot";

/// Header of shortened-action profiles.
pub const ACTION_HEADER: &str = "X,S1_quadrature,S1_closed";

/// Pinned rendering of one numeric field.
pub fn field(value: f64) -> String {
    format!("{value:.16e}")
}

/// Renders a trajectory series (annotated or not) as a CSV table.
///
/// Diagnostics columns of an un-annotated series are `NaN`.
pub fn trajectory_csv(series: &TrajectorySeries) -> String {
    let mut out = String::with_capacity(64 + series.samples.len() * 200);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (i, s) in series.samples.iter().enumerate() {
        let (h_eff, l17, radical) = match series.diagnostics.as_ref().map(|d| &d[i]) {
            Some(d) => (
                d.effective_hamiltonian,
                d.interaction_lagrangian.unwrap_or(f64::NAN),
                d.radical,
            ),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            field(s.t),
            field(s.particle_pos),
            field(s.particle_vel),
            field(s.cloud_pos),
            field(s.cloud_vel),
            field(h_eff),
            field(l17),
            field(radical),
        );
    }
    out
}

/// Renders per-sample deviations of an integration from the closed forms.
pub fn oracle_error_csv(rows: &[(f64, [f64; 4])]) -> String {
    let mut out = String::with_capacity(32 + rows.len() * 125);
    out.push_str(ORACLE_ERROR_HEADER);
    out.push('\n');
    for (t, errs) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            field(*t),
            field(errs[0]),
            field(errs[1]),
            field(errs[2]),
            field(errs[3]),
        );
    }
    out
}

/// Renders a shortened-action profile (quadrature route next to the closed
/// form).
pub fn action_csv(positions: &[f64], quadrature: &[f64], closed: &[f64]) -> String {
    let mut out = String::with_capacity(32 + positions.len() * 75);
    out.push_str(ACTION_HEADER);
    out.push('\n');
    for i in 0..positions.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            field(positions[i]),
            field(quadrature[i]),
            field(closed[i]),
        );
    }
    out
}

/// Parses a trajectory CSV produced by [`trajectory_csv`] back into rows.
///
/// Used by the determinism checks to prove the format round-trips exactly.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<[f64; 8]>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(TRAJECTORY_HEADER) => {}
        other => return Err(format!("bad header: {other:?}")),
    }
    let mut rows = Vec::new();
    for (num, line) in lines.enumerate() {
        let mut row = [0.0_f64; 8];
        let mut fields = line.split(',');
        for slot in &mut row {
            let raw = fields
                .next()
                .ok_or_else(|| format!("line {}: too few fields", num + 2))?;
            *slot = raw
                .parse::<f64>()
                .map_err(|e| format!("line {}: {e}", num + 2))?;
        }
        if fields.next().is_some() {
            return Err(format!("line {}: too many fields", num + 2));
        }
        rows.push(row);
    }
    Ok(rows)
}
