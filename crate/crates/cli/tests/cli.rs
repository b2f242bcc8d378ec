//! End-to-end contract tests that spawn the installed binary: scenario
//! validation, exit codes, output-directory precedence, and report layout.
//!
//! Exit-code contract: 0 all checks passed (discrepancies non-fatal by
//! default), 1 hard failure or runner error, 2 configuration rejected.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

/// Fresh command handle with the output override cleared, so an ambient
/// RELWAVE_OUTPUT in the test environment cannot skew precedence checks.
fn relwave() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relwave"));
    cmd.env_remove("RELWAVE_OUTPUT");
    cmd
}

fn write_scenario(dir: &Path, file: &str, body: &str) -> PathBuf {
    let path = dir.join(file);
    fs::write(&path, body).expect("scenario file written");
    path
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_report(dir: &Path) -> serde_json::Value {
    let body = fs::read_to_string(dir.join("report.json")).expect("report.json present");
    serde_json::from_str(&body).expect("report.json parses")
}

#[test]
fn rejects_unknown_keys_and_guard_violations_together() {
    let tmp = TempDir::new().unwrap();
    let scenario = write_scenario(
        tmp.path(),
        "bad.toml",
        r#"
name = "bad"
command = "geodesic"
gamma = 1.0

[parameters]
bogus = 3
v0 = 1.5
"#,
    );
    let out = relwave()
        .args(["geodesic", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "config errors exit with 2");
    let err = stderr_text(&out);
    assert!(err.contains("configuration rejected:"), "stderr: {err}");
    assert!(err.contains("unknown key \"gamma\""), "stderr: {err}");
    assert!(err.contains("unknown key \"parameters.bogus\""), "stderr: {err}");
    assert!(
        err.contains("velocity guard"),
        "the out-of-range velocity names the guard; stderr: {err}"
    );
}

#[test]
fn rejects_scenario_whose_command_differs_from_the_subcommand() {
    let tmp = TempDir::new().unwrap();
    let scenario = write_scenario(
        tmp.path(),
        "mismatch.toml",
        "name = \"m\"\ncommand = \"jitter\"\n",
    );
    let out = relwave()
        .args(["dispersion", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_text(&out);
    assert!(
        err.contains("scenario declares \"jitter\" but \"dispersion\" was invoked"),
        "stderr: {err}"
    );
}

#[test]
fn fills_defaults_from_a_minimal_scenario() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let scenario = write_scenario(
        tmp.path(),
        "minimal.toml",
        "name = \"jitter-defaults\"\ncommand = \"jitter\"\n",
    );
    let out = relwave()
        .args(["jitter", "--scenario"])
        .arg(&scenario)
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_text(&out));

    let report = read_report(&out_dir);
    assert_eq!(report["name"], "jitter-defaults");
    assert_eq!(report["command"], "jitter");
    assert_eq!(report["conventions"]["c"], 1.0);
    assert_eq!(report["conventions"]["hbar_m"], 1.0);
    assert_eq!(report["conventions"]["energy_sign"], "+1");
    assert_eq!(report["conventions"]["spatial_sign"], "+1");
    assert_eq!(report["parameters"]["electron"], true);
    let artifacts = report["artifacts"].as_array().expect("artifact manifest");
    assert!(artifacts.iter().any(|a| a == "jitter.csv"));
    assert!(out_dir.join("jitter.csv").is_file(), "listed artifact exists");
}

#[test]
fn accepts_json_scenarios_by_extension() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let scenario = write_scenario(
        tmp.path(),
        "algebra.json",
        r#"{"name": "algebra-json", "command": "algebra"}"#,
    );
    let out = relwave()
        .args(["algebra", "--scenario"])
        .arg(&scenario)
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_text(&out));
    let report = read_report(&out_dir);
    assert_eq!(report["name"], "algebra-json");
    assert_eq!(report["command"], "algebra");
}

#[test]
fn convention_flag_flips_signs_in_the_report() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let out = relwave()
        .args(["jitter", "--convention", "eps=-1,s=-1", "--output"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_text(&out));
    let report = read_report(&out_dir);
    assert_eq!(report["conventions"]["energy_sign"], "-1");
    assert_eq!(report["conventions"]["spatial_sign"], "-1");
}

#[test]
fn malformed_convention_flag_is_a_config_error() {
    let out = relwave()
        .args(["jitter", "--convention", "eps=2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_text(&out);
    assert!(err.contains("expected \"+1\" or \"-1\""), "stderr: {err}");
}

#[test]
fn environment_variable_overrides_the_output_flag() {
    let tmp = TempDir::new().unwrap();
    let env_dir = tmp.path().join("from-env");
    let flag_dir = tmp.path().join("from-flag");
    let out = relwave()
        .args(["algebra", "--output"])
        .arg(&flag_dir)
        .env("RELWAVE_OUTPUT", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_text(&out));
    assert!(env_dir.join("report.json").is_file());
    assert!(!flag_dir.join("report.json").exists());
}

#[test]
fn discrepancy_verdicts_are_nonfatal_unless_requested() {
    let tmp = TempDir::new().unwrap();

    // The dispersion suite records a measured discrepancy by design.
    let lenient = relwave()
        .args(["dispersion", "--output"])
        .arg(tmp.path().join("lenient"))
        .output()
        .unwrap();
    assert_eq!(
        lenient.status.code(),
        Some(0),
        "documented discrepancies do not fail the run; stderr: {}",
        stderr_text(&lenient)
    );

    let strict = relwave()
        .args(["dispersion", "--fail-on-discrepancy", "--output"])
        .arg(tmp.path().join("strict"))
        .output()
        .unwrap();
    assert_eq!(
        strict.status.code(),
        Some(1),
        "the strict flag promotes discrepancies to failures"
    );
}

#[test]
fn runner_errors_exit_with_one_and_name_the_module() {
    let tmp = TempDir::new().unwrap();
    // A rest launch in this rising profile drifts to where the temporal
    // coefficient crosses zero; the integrator must refuse, not extrapolate.
    let scenario = write_scenario(
        tmp.path(),
        "domain-exit.toml",
        r#"
name = "domain-exit"
command = "geodesic"

[parameters]
g_tt = "1 + 0.2*x"
tau_end = 10.0
"#,
    );
    let out = relwave()
        .args(["geodesic", "--scenario"])
        .arg(&scenario)
        .arg("--output")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_text(&out));
    let err = stderr_text(&out);
    assert!(err.contains("run failed: geodesic"), "stderr: {err}");
}
