//! `inertonlab` — scenario runner for the particle–inerton laboratory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use inerton_cli::scenario::{self, Format};
use inerton_cli::{config, CliResult};

/// Numerical laboratory for a particle coupled to its inerton cloud:
/// closed-form trajectories, verified integrators, action quantization, and
/// substrate-mechanics identities, emitted as CSV, SVG, and reports.
#[derive(Parser)]
#[command(name = "inertonlab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    scenario: Scenario,
}

#[derive(Subcommand)]
enum Scenario {
    /// Closed-form trajectory sampled on the configured grid (trajectory.csv).
    Analytic(Common),
    /// Numerical integration plus an error table against the closed forms
    /// (trajectory.csv, oracle_error.csv).
    Integrate(Common),
    /// Full verification suite (verify_report.txt, verify_report.json);
    /// exits 2 if any check fails.
    Verify(Common),
    /// Deterministic SVG figures (trajectories.svg, periods.svg).
    Figures(Common),
    /// Action profile and de Broglie closure (action_profile.csv).
    Quantize(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; an empty file selects the canonical model.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output directory for artifacts (created if missing).
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Stdout format for the run summary.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn dispatch(
    runner: impl Fn(&config::Resolved, &std::path::Path, Format) -> CliResult<String>,
    common: &Common,
) -> CliResult<String> {
    let resolved = config::load(&common.config)?;
    runner(&resolved, &common.out, common.format)
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.scenario {
        Scenario::Analytic(c) => dispatch(scenario::run_analytic, c),
        Scenario::Integrate(c) => dispatch(scenario::run_integrate, c),
        Scenario::Verify(c) => dispatch(scenario::run_verify, c),
        Scenario::Figures(c) => dispatch(scenario::run_figures, c),
        Scenario::Quantize(c) => dispatch(scenario::run_quantize, c),
    }
}

fn main() -> ExitCode {
    // clap exits 2 on usage errors by default; 2 is reserved for
    // verification failures here, so usage errors are remapped to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("inertonlab: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).expect("exit codes are 1..=3"))
        }
    }
}
