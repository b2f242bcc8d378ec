//! Command-line front end: validates a scenario, runs the requested
//! checks, and writes a deterministic `report.json` plus CSV artifacts.
//!
//! Exit codes: 0 all checks passed (measured discrepancies are non-fatal
//! unless `--fail-on-discrepancy`), 1 a check failed or the computation
//! errored, 2 the configuration was rejected.

mod report;
mod runners;
mod scenario;

use clap::{Args, Parser, Subcommand};
use report::{RunReport, Verdict};
use scenario::{build_scenario, CommandKind, Overrides};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "relwave",
    version,
    about = "Numerical cross-checks for 1+1D relativistic wave mechanics"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Scenario file (TOML, or JSON when the extension is .json).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Directory for report.json and CSV artifacts.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for the randomized ensembles.
    #[arg(long)]
    seed: Option<u64>,
    /// Sign-convention overrides, e.g. "eps=-1,s=+1".
    #[arg(long)]
    convention: Option<String>,
    /// Turn measured discrepancies into a nonzero exit.
    #[arg(long)]
    fail_on_discrepancy: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact two-by-two matrix algebra identities.
    Algebra(Common),
    /// Plane-wave residuals of the second-order operator.
    Dispersion(Common),
    /// On-shell two-component amplitudes and the auxiliary-field elimination.
    Dirac(Common),
    /// Proper-time world lines in static diagonal profiles.
    Geodesic(Common),
    /// Least action, stationary paths, and phase accumulation.
    Action(Common),
    /// First-order field pair: transport, energy, wave-equation residuals.
    Maxwell(Common),
    /// Time evolution of the scalar and coupled-pair equations.
    Evolve(Common),
    /// Oscillation scale of interfering branch pairs.
    Jitter(Common),
    /// Every module with its default parameters.
    All(Common),
}

impl Cmd {
    fn split(&self) -> (CommandKind, &Common) {
        match self {
            Cmd::Algebra(c) => (CommandKind::Algebra, c),
            Cmd::Dispersion(c) => (CommandKind::Dispersion, c),
            Cmd::Dirac(c) => (CommandKind::Dirac, c),
            Cmd::Geodesic(c) => (CommandKind::Geodesic, c),
            Cmd::Action(c) => (CommandKind::Action, c),
            Cmd::Maxwell(c) => (CommandKind::Maxwell, c),
            Cmd::Evolve(c) => (CommandKind::Evolve, c),
            Cmd::Jitter(c) => (CommandKind::Jitter, c),
            Cmd::All(c) => (CommandKind::All, c),
        }
    }
}

fn verdict_tag(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::MeasuredDiscrepancy => "DISC",
    }
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let (kind, common) = cli.command.split();
    let overrides = Overrides {
        seed: common.seed,
        convention: common.convention.clone(),
        fail_on_discrepancy: common.fail_on_discrepancy,
    };

    let started = Instant::now();
    let scenario = match build_scenario(kind, common.scenario.as_deref(), &overrides) {
        Ok(s) => s,
        Err(config) => {
            eprintln!("configuration rejected:");
            for m in &config.messages {
                eprintln!("  - {m}");
            }
            return 2;
        }
    };

    let output = match runners::run_command(&scenario) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("run failed: {e}");
            return 1;
        }
    };

    let out_dir = std::env::var_os("RELWAVE_OUTPUT")
        .map(PathBuf::from)
        .or_else(|| common.output.clone())
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("./relwave_out"));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("cannot create output directory {}: {e}", out_dir.display());
        return 1;
    }

    let mut artifact_names: Vec<String> =
        output.artifacts.iter().map(|(name, _)| name.clone()).collect();
    artifact_names.sort();
    for (name, body) in &output.artifacts {
        if let Err(e) = std::fs::write(out_dir.join(name), body) {
            eprintln!("cannot write artifact {name}: {e}");
            return 1;
        }
    }

    let run_report = RunReport {
        name: scenario.name.clone(),
        command: scenario.command.name().to_string(),
        seed: scenario.seed,
        conventions: scenario.conv,
        parameters: scenario.parameters_echo(),
        checks: output.checks,
        artifacts: artifact_names,
    };
    let report_path = out_dir.join("report.json");
    if let Err(e) = std::fs::write(&report_path, run_report.to_json()) {
        eprintln!("cannot write {}: {e}", report_path.display());
        return 1;
    }

    println!("relwave {} — scenario \"{}\"", scenario.command.name(), scenario.name);
    for check in &run_report.checks {
        match check.threshold {
            Some(th) => println!(
                "[{}] {}  (value {:.6e}, threshold {:.3e})",
                verdict_tag(check.verdict),
                check.name,
                check.value,
                th
            ),
            None => println!(
                "[{}] {}  (value {:.6e})",
                verdict_tag(check.verdict),
                check.name,
                check.value
            ),
        }
        if check.verdict == Verdict::Fail {
            println!("       {}", check.detail);
        }
    }
    let (pass, fail, disc) = run_report.counts();
    println!(
        "summary: {pass} passed, {fail} failed, {disc} measured discrepancies ({:.2}s)",
        started.elapsed().as_secs_f64()
    );
    println!("report: {}", report_path.display());

    if run_report.has_failure() {
        1
    } else if scenario.fail_on_discrepancy && run_report.has_discrepancy() {
        1
    } else {
        0
    }
}

fn main() {
    std::process::exit(real_main());
}
