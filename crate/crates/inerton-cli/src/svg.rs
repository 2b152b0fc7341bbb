//! Hand-rendered, byte-deterministic SVG figures.
//!
//! No external plotting stack: the figures are simple enough (polylines over
//! a time axis, labeled bars) that direct SVG emission keeps the bytes
//! reproducible across platforms. All coordinates are formatted with fixed
//! precision; nothing depends on clocks, locales or map iteration order.

use std::fmt::Write as _;

use inerton_core::{DerivedQuantities, TrajectorySeries};

const PANEL_W: f64 = 430.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 58.0;
const MARGIN_T: f64 = 44.0;
const GAP_X: f64 = 30.0;
const GAP_Y: f64 = 52.0;
const STROKE: &str = "#1f6fb2";

fn px(v: f64) -> String {
    format!("{v:.2}")
}

fn label(v: f64) -> String {
    format!("{v:.3}")
}

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    points: Vec<(f64, f64)>,
}

/// Caps a polyline at roughly 2000 vertices so figures stay small; keeps the
/// final sample so the curve always reaches the horizon.
fn decimate(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let stride = (points.len() / 2000).max(1);
    let last = points.len() - 1;
    points
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0 || *i == last)
        .map(|(_, p)| p)
        .collect()
}

fn render_panel(out: &mut String, panel: &Panel, x0: f64, y0: f64) {
    let (mut t_min, mut t_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut v_min, mut v_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(t, v) in &panel.points {
        t_min = t_min.min(t);
        t_max = t_max.max(t);
        v_min = v_min.min(v);
        v_max = v_max.max(v);
    }
    if t_max <= t_min {
        t_max = t_min + 1.0;
    }
    let pad = 0.05 * (v_max - v_min).max(1e-12);
    v_min -= pad;
    v_max += pad;
    let sx = |t: f64| x0 + (t - t_min) / (t_max - t_min) * PANEL_W;
    let sy = |v: f64| y0 + PANEL_H - (v - v_min) / (v_max - v_min) * PANEL_H;

    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444" stroke-width="1"/>"##,
        px(x0),
        px(y0),
        px(PANEL_W),
        px(PANEL_H)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="15" fill="#111">{}</text>"##,
        px(x0),
        px(y0 - 10.0),
        panel.title
    );
    // Zero line when the range straddles zero.
    if v_min < 0.0 && v_max > 0.0 {
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbb" stroke-width="1" stroke-dasharray="4 4"/>"##,
            px(x0),
            px(sy(0.0)),
            px(x0 + PANEL_W),
            px(sy(0.0))
        );
    }
    // Axis extremes.
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="11" fill="#333" text-anchor="end">{}</text>"##,
        px(x0 - 6.0),
        px(y0 + 10.0),
        label(v_max)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="11" fill="#333" text-anchor="end">{}</text>"##,
        px(x0 - 6.0),
        px(y0 + PANEL_H),
        label(v_min)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="11" fill="#333">t = {}</text>"##,
        px(x0),
        px(y0 + PANEL_H + 16.0),
        label(t_min)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="11" fill="#333" text-anchor="end">t = {}</text>"##,
        px(x0 + PANEL_W),
        px(y0 + PANEL_H + 16.0),
        label(t_max)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="11" fill="#333" transform="rotate(-90 {} {})">{}</text>"##,
        px(x0 - 40.0),
        px(y0 + PANEL_H / 2.0),
        px(x0 - 40.0),
        px(y0 + PANEL_H / 2.0),
        panel.y_label
    );

    let mut path = String::with_capacity(panel.points.len() * 14);
    for &(t, v) in &panel.points {
        if !path.is_empty() {
            path.push(' ');
        }
        let _ = write!(path, "{},{}", px(sx(t)), px(sy(v)));
    }
    let _ = writeln!(
        out,
        r##"<polyline points="{path}" fill="none" stroke="{STROKE}" stroke-width="1.2"/>"##
    );
}

/// Four-panel figure of a sampled trajectory: particle position and speed,
/// cloud front position and velocity.
pub fn trajectory_figure(series: &TrajectorySeries) -> String {
    let grab = |f: fn(&inerton_core::SystemState) -> f64| -> Vec<(f64, f64)> {
        decimate(series.samples.iter().map(|s| (s.t, f(s))).collect())
    };
    let panels = [
        Panel {
            title: "particle position X(t)",
            y_label: "X",
            points: grab(|s| s.particle_pos),
        },
        Panel {
            title: "particle speed Xdot(t)",
            y_label: "Xdot",
            points: grab(|s| s.particle_vel),
        },
        Panel {
            title: "cloud front x(t)",
            y_label: "x",
            points: grab(|s| s.cloud_pos),
        },
        Panel {
            title: "cloud front velocity xdot(t)",
            y_label: "xdot",
            points: grab(|s| s.cloud_vel),
        },
    ];

    let width = MARGIN_L + 2.0 * PANEL_W + GAP_X + 20.0;
    let height = MARGIN_T + 2.0 * (PANEL_H + GAP_Y) + 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = px(width),
        h = px(height)
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        px(width),
        px(height)
    );
    for (i, panel) in panels.iter().enumerate() {
        let col = (i % 2) as f64;
        let row = (i / 2) as f64;
        let x0 = MARGIN_L + col * (PANEL_W + GAP_X);
        let y0 = MARGIN_T + row * (PANEL_H + GAP_Y);
        render_panel(&mut out, panel, x0, y0);
    }
    out.push_str("</svg>\n");
    out
}

/// Bar figure comparing the spatial periods and breathing amplitudes:
/// `λ = v0·T`, `Λ = c·T`, `λ/π` (particle oscillation) and `Λ/π` (cloud
/// amplitude), drawn to a common scale.
pub fn periods_figure(dq: &DerivedQuantities) -> String {
    let pi = std::f64::consts::PI;
    let rows = [
        ("lambda = v0*T (particle spatial period)", dq.particle_period),
        ("Lambda = c*T (cloud spatial period)", dq.cloud_period),
        ("lambda/pi (particle oscillation amplitude)", dq.particle_period / pi),
        ("Lambda/pi (cloud breathing amplitude)", dq.cloud_period / pi),
    ];
    let longest = rows
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::MIN_POSITIVE, f64::max);
    let (width, height) = (720.0, 340.0);
    let bar_x = 30.0;
    let bar_max = width - 2.0 * bar_x;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = px(width),
        h = px(height)
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        px(width),
        px(height)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="26" font-family="monospace" font-size="16" fill="#111">spatial periods and amplitudes (common scale)</text>"##,
        px(bar_x)
    );
    for (i, (name, value)) in rows.iter().enumerate() {
        let y = 56.0 + i as f64 * 70.0;
        let w = (value / longest) * bar_max;
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" font-family="monospace" font-size="13" fill="#111">{name} = {}</text>"##,
            px(bar_x),
            px(y - 6.0),
            label(*value)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{}" height="26" fill="{STROKE}" fill-opacity="0.85"/>"##,
            px(bar_x),
            px(y),
            px(w)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use inerton_core::model::{derive_quantities, ModelParams};
    use inerton_core::trajectory::sample_trajectory;

    #[test]
    fn figures_are_wellformed_and_deterministic() {
        let dq = derive_quantities(&ModelParams::canonical()).unwrap();
        let grid: Vec<f64> = (0..=4000).map(|k| 4.0 * k as f64 / 4000.0).collect();
        let series = sample_trajectory(&grid, &dq).unwrap();
        let a = trajectory_figure(&series);
        let b = trajectory_figure(&series);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg "));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polyline").count(), 4);

        let p = periods_figure(&dq);
        assert!(p.starts_with("<svg "));
        assert_eq!(p.matches("<rect").count(), 5);
        assert!(p.contains("lambda = v0*T"));
    }

    #[test]
    fn decimation_keeps_the_last_point() {
        let points: Vec<(f64, f64)> = (0..10_001).map(|i| (i as f64, 0.0)).collect();
        let thin = decimate(points);
        assert!(thin.len() <= 2002);
        assert_eq!(thin.last().unwrap().0, 10_000.0);
    }
}
