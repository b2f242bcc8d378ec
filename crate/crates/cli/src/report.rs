//! Run reports with deterministic serialization.
//!
//! Artifacts must be byte-identical across runs of the same (scenario,
//! seed), so the JSON writer sorts object keys (serde_json's default map
//! is ordered) and renders every float as `{:.16e}` — 17 significant
//! digits, enough to round-trip an f64. Wall-clock time is printed to the
//! console only and never enters a file.

use relwave_core::Conventions;
use serde_json::{Map, Value};
use std::fmt::Write as _;

/// Outcome class of one named check.
///
/// `MeasuredDiscrepancy` marks a reproducible numeric mismatch between two
/// source statements that the workbench documents rather than resolves; it
/// is non-fatal unless the run asks otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    MeasuredDiscrepancy,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::MeasuredDiscrepancy => "measured-discrepancy",
        }
    }
}

/// One named check with its measured value and, when meaningful, the
/// threshold it was held against.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub value: f64,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Check {
    /// Pass iff |value| <= threshold.
    pub fn bounded(name: &str, value: f64, threshold: f64, detail: &str) -> Check {
        Check {
            name: name.to_string(),
            verdict: if value.abs() <= threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            value,
            threshold: Some(threshold),
            detail: detail.to_string(),
        }
    }

    /// Pass iff the exact condition held; value 0/1 mirrors the verdict.
    pub fn exact(name: &str, holds: bool, detail: &str) -> Check {
        Check {
            name: name.to_string(),
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            value: if holds { 0.0 } else { 1.0 },
            threshold: Some(0.0),
            detail: detail.to_string(),
        }
    }

    /// Pass iff value lies within center ± half_width.
    pub fn windowed(name: &str, value: f64, center: f64, half_width: f64, detail: &str) -> Check {
        Check {
            name: name.to_string(),
            verdict: if (value - center).abs() <= half_width {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            value,
            threshold: Some(half_width),
            detail: detail.to_string(),
        }
    }

    /// A documented mismatch, recorded with its evidence value.
    pub fn discrepancy(name: &str, value: f64, detail: &str) -> Check {
        Check {
            name: name.to_string(),
            verdict: Verdict::MeasuredDiscrepancy,
            value,
            threshold: None,
            detail: detail.to_string(),
        }
    }
}

/// Aggregated result of one command run. `parameters` echoes the
/// effective (defaults-filled) configuration; the output directory is
/// deliberately not part of the report so relocation cannot change bytes.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub command: String,
    pub seed: u64,
    pub conventions: Conventions,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut disc = 0;
        for c in &self.checks {
            match c.verdict {
                Verdict::Pass => pass += 1,
                Verdict::Fail => fail += 1,
                Verdict::MeasuredDiscrepancy => disc += 1,
            }
        }
        (pass, fail, disc)
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn has_discrepancy(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.verdict == Verdict::MeasuredDiscrepancy)
    }

    fn to_value(&self) -> Value {
        let mut conv = Map::new();
        conv.insert("c".into(), jnum(self.conventions.c));
        conv.insert("hbar_m".into(), jnum(self.conventions.hbar_m));
        conv.insert(
            "energy_sign".into(),
            Value::String(self.conventions.energy_sign.to_string()),
        );
        conv.insert(
            "spatial_sign".into(),
            Value::String(self.conventions.spatial_sign.to_string()),
        );
        conv.insert(
            "velocity_guard".into(),
            jnum(self.conventions.velocity_guard),
        );

        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), Value::String(c.name.clone()));
                m.insert("verdict".into(), Value::String(c.verdict.as_str().into()));
                m.insert("value".into(), jnum(c.value));
                m.insert(
                    "threshold".into(),
                    c.threshold.map(jnum).unwrap_or(Value::Null),
                );
                m.insert("detail".into(), Value::String(c.detail.clone()));
                Value::Object(m)
            })
            .collect();

        let (pass, fail, disc) = self.counts();
        let mut summary = Map::new();
        summary.insert("pass".into(), Value::from(pass as u64));
        summary.insert("fail".into(), Value::from(fail as u64));
        summary.insert("measured_discrepancy".into(), Value::from(disc as u64));

        let mut root = Map::new();
        root.insert("name".into(), Value::String(self.name.clone()));
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert(
            "version".into(),
            Value::String(env!("CARGO_PKG_VERSION").into()),
        );
        root.insert("seed".into(), Value::from(self.seed));
        root.insert("conventions".into(), Value::Object(conv));
        root.insert("parameters".into(), self.parameters.clone());
        root.insert("checks".into(), Value::Array(checks));
        root.insert("summary".into(), Value::Object(summary));
        root.insert(
            "artifacts".into(),
            Value::Array(
                self.artifacts
                    .iter()
                    .map(|a| Value::String(a.clone()))
                    .collect(),
            ),
        );
        Value::Object(root)
    }

    /// Deterministic pretty JSON with fixed float formatting.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }
}

/// f64 → JSON number; non-finite values become descriptive strings since
/// JSON has no encoding for them.
pub fn jnum(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

/// 17-significant-digit float rendering used in every artifact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let _ = write!(out, "{}", fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", serde_json::to_string(s).expect("string encode"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            // serde_json's default map is BTree-backed: iteration is
            // already key-sorted, which the byte-determinism tests rely on.
            for (i, (k, val)) in map.iter().enumerate() {
                indent(out, depth + 1);
                let _ = write!(out, "{}: ", serde_json::to_string(k).expect("key encode"));
                write_value(out, val, depth + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

/// Builds a CSV artifact: header row plus `{:.16e}`-formatted numeric
/// cells (integers rendered as integers).
pub struct CsvBuilder {
    text: String,
    columns: usize,
}

/// One CSV cell.
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as i64)
    }
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> CsvBuilder {
        CsvBuilder {
            text: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "row width must match header");
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Int(i) => format!("{i}"),
                Cell::Float(x) => fmt_f64(*x),
            })
            .collect();
        self.text.push_str(&rendered.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
