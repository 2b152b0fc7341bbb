//! Verification report: typed checks, documented discrepancies, and
//! deterministic text/JSON rendering.

use std::fmt::Write as _;

use serde::Serialize;

use inerton_core::model::HClosure;
use inerton_core::{DerivedQuantities, ModelParams};

/// One verified identity with its worst observed residual.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Stable kebab-case identifier.
    pub name: String,
    /// The identity being checked, written out literally.
    pub identity: String,
    /// Worst normalized residual observed (0 means exact).
    pub residual: f64,
    /// Tolerance the residual is held against.
    pub tolerance: f64,
    /// `residual <= tolerance` and all structural conditions held.
    pub passed: bool,
    /// What was scanned: grids, spans, seeds.
    pub note: String,
}

impl Check {
    /// Builds a check from its worst residual; `passed` follows the
    /// comparison (NaN counts as failure).
    pub fn from_residual(
        name: &str,
        identity: &str,
        residual: f64,
        tolerance: f64,
        note: String,
    ) -> Self {
        Self {
            name: name.to_string(),
            identity: identity.to_string(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
            note,
        }
    }
}

/// A documented divergence between the source derivation and what the
/// numbers show. Discrepancies are reported, never asserted away, and are
/// excluded from pass/fail.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    /// Stable kebab-case identifier.
    pub name: String,
    /// What the derivation claims.
    pub claim: String,
    /// What numerical evaluation shows.
    pub observed: String,
    /// How the laboratory handles the gap.
    pub handling: String,
}

/// Echo of the resolved model parameters a report was built for.
#[derive(Debug, Clone, Serialize)]
pub struct ModelEcho {
    pub rest_mass: f64,
    pub initial_speed: f64,
    pub limit_speed: f64,
    pub half_period: f64,
    pub ensemble_size: usize,
    pub action_quantum: f64,
    pub action_quantum_rule: String,
}

/// Full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub model: ModelEcho,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
    pub passed: bool,
}

impl VerificationReport {
    /// Assembles a report; `passed` is the conjunction of all checks.
    pub fn new(
        params: &ModelParams,
        quantities: &DerivedQuantities,
        checks: Vec<Check>,
        discrepancies: Vec<Discrepancy>,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        let rule = match params.h_closure {
            HClosure::Derived => "derived: h = 2*T*E",
            HClosure::Given(_) => "given verbatim",
        };
        Self {
            model: ModelEcho {
                rest_mass: quantities.rest_mass,
                initial_speed: quantities.initial_speed,
                limit_speed: quantities.limit_speed,
                half_period: quantities.half_period,
                ensemble_size: params.ensemble_size,
                action_quantum: quantities.action_quantum,
                action_quantum_rule: rule.to_string(),
            },
            checks,
            discrepancies,
            passed,
        }
    }

    /// Names of the failing checks.
    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Deterministic plain-text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "inertonlab verification report");
        let _ = writeln!(out, "==============================");
        let _ = writeln!(out);
        let m = &self.model;
        let _ = writeln!(
            out,
            "model: M0 = {}, v0 = {}, c = {}, T = {}, N = {}, h = {} ({})",
            m.rest_mass,
            m.initial_speed,
            m.limit_speed,
            m.half_period,
            m.ensemble_size,
            m.action_quantum,
            m.action_quantum_rule
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "checks");
        let _ = writeln!(out, "------");
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "[{verdict}] {:<28} residual {:>10.3e}  tolerance {:>8.1e}",
                c.name, c.residual, c.tolerance
            );
            let _ = writeln!(out, "       identity: {}", c.identity);
            let _ = writeln!(out, "       scan:     {}", c.note);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "discrepancies (documented, excluded from pass/fail)");
        let _ = writeln!(out, "----------------------------------------------------");
        for d in &self.discrepancies {
            let _ = writeln!(out, "* {}", d.name);
            let _ = writeln!(out, "  claim:    {}", d.claim);
            let _ = writeln!(out, "  observed: {}", d.observed);
            let _ = writeln!(out, "  handling: {}", d.handling);
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "overall: {} ({} checks, {} discrepancies documented)",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.discrepancies.len()
        );
        out
    }

    /// Deterministic pretty-printed JSON rendering.
    pub fn render_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
