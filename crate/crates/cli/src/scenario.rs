//! Scenario loading and validation.
//!
//! A scenario is a TOML file (JSON accepted for files ending in `.json`)
//! with the shape
//!
//! ```toml
//! name = "my-run"
//! command = "dispersion"
//! seed = 7
//! output_dir = "out"
//! fail_on_discrepancy = false
//!
//! [conventions]
//! c = 1.0
//! hbar_m = 1.0
//! energy_sign = "+1"
//! spatial_sign = "+1"
//!
//! [parameters]
//! v_min = 1e-3
//! v_max = 0.99
//! count = 50
//! ```
//!
//! Validation is exhaustive: every unknown key, type mismatch, and range
//! violation is collected before reporting, so one round trip fixes a
//! config. All physical ranges are checked here, before any computation
//! starts.

use crate::report::jnum;
use relwave_core::kinematics::Kinematics;
use relwave_core::{Conventions, Sign};
use serde_json::{Map, Value};
use std::fmt;
use std::path::{Path, PathBuf};

/// Aggregate of every validation problem found in one pass.
#[derive(Debug)]
pub struct ConfigError {
    pub messages: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.messages.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn single(message: String) -> ConfigError {
        ConfigError {
            messages: vec![message],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Algebra,
    Dispersion,
    Dirac,
    Geodesic,
    Action,
    Maxwell,
    Evolve,
    Jitter,
    All,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Algebra => "algebra",
            CommandKind::Dispersion => "dispersion",
            CommandKind::Dirac => "dirac",
            CommandKind::Geodesic => "geodesic",
            CommandKind::Action => "action",
            CommandKind::Maxwell => "maxwell",
            CommandKind::Evolve => "evolve",
            CommandKind::Jitter => "jitter",
            CommandKind::All => "all",
        }
    }

    pub fn parse(text: &str) -> Option<CommandKind> {
        Some(match text {
            "algebra" => CommandKind::Algebra,
            "dispersion" => CommandKind::Dispersion,
            "dirac" => CommandKind::Dirac,
            "geodesic" => CommandKind::Geodesic,
            "action" => CommandKind::Action,
            "maxwell" => CommandKind::Maxwell,
            "evolve" => CommandKind::Evolve,
            "jitter" => CommandKind::Jitter,
            "all" => CommandKind::All,
            _ => return None,
        })
    }
}

/// Velocity grid shared by the dispersion and on-shell scans.
#[derive(Debug, Clone)]
pub struct ScanParams {
    pub v_min: f64,
    pub v_max: f64,
    pub count: usize,
    /// Explicit grid; overrides the log spacing when present.
    pub velocities: Option<Vec<f64>>,
    pub tol: f64,
}

impl Default for ScanParams {
    fn default() -> ScanParams {
        ScanParams {
            v_min: 1e-3,
            v_max: 0.99,
            count: 50,
            velocities: None,
            tol: 1e-12,
        }
    }
}

impl ScanParams {
    pub fn grid(&self) -> Vec<f64> {
        if let Some(vs) = &self.velocities {
            return vs.clone();
        }
        (0..self.count)
            .map(|i| {
                self.v_min
                    * (self.v_max / self.v_min).powf(i as f64 / (self.count - 1) as f64)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GeodesicParams {
    /// Closed-form profile; absence selects the standard two-metric suite.
    pub g_tt: Option<String>,
    pub g_xx: String,
    pub x0: f64,
    pub v0: f64,
    pub tau_end: f64,
    pub dtau: f64,
}

impl Default for GeodesicParams {
    fn default() -> GeodesicParams {
        GeodesicParams {
            g_tt: None,
            g_xx: "1".to_string(),
            x0: 0.0,
            v0: 0.0,
            tau_end: 5.0,
            dtau: 5e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ActionParams {
    /// Potential expression in x; absence selects the free particle.
    pub potential: Option<String>,
    pub start_t: f64,
    pub start_x: f64,
    pub end_t: f64,
    pub end_x: f64,
    pub n_intervals: usize,
    pub n_perturbations: usize,
    pub amplitude: f64,
}

impl Default for ActionParams {
    fn default() -> ActionParams {
        ActionParams {
            potential: None,
            start_t: 0.0,
            start_x: 0.0,
            end_t: 1.0,
            end_x: 0.6,
            n_intervals: 200,
            n_perturbations: 100,
            amplitude: 0.02,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MaxwellParams {
    pub n: usize,
    pub courant: f64,
    /// Gaussian pulse width in grid cells.
    pub width_cells: f64,
    pub long_run_steps: usize,
}

impl Default for MaxwellParams {
    fn default() -> MaxwellParams {
        MaxwellParams {
            n: 512,
            courant: 0.5,
            width_cells: 16.0,
            long_run_steps: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    Scalar,
    Pair,
    Both,
}

impl EquationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::Scalar => "scalar",
            EquationKind::Pair => "pair",
            EquationKind::Both => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveParams {
    pub equation: EquationKind,
    pub n: usize,
    pub length: f64,
    pub x_center: f64,
    pub width: f64,
    pub v_center: f64,
    pub dt: f64,
    pub steps: usize,
    /// Use the halved kinetic coefficient.
    pub half_kinetic: bool,
    pub rest_term: bool,
    pub record_every: usize,
}

impl Default for EvolveParams {
    fn default() -> EvolveParams {
        EvolveParams {
            equation: EquationKind::Both,
            n: 1024,
            length: 80.0,
            x_center: -10.0,
            width: 2.0,
            // v with p = v/w exactly 0.5
            v_center: 0.447_213_595_499_958,
            dt: 0.01,
            steps: 1000,
            half_kinetic: false,
            rest_term: true,
            record_every: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JitterParams {
    pub velocities: Vec<f64>,
    pub electron: bool,
}

impl Default for JitterParams {
    fn default() -> JitterParams {
        JitterParams {
            velocities: (1..=9).map(|i| i as f64 / 10.0).collect(),
            electron: true,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Params {
    Empty,
    Scan(ScanParams),
    Geodesic(GeodesicParams),
    Action(ActionParams),
    Maxwell(MaxwellParams),
    Evolve(EvolveParams),
    Jitter(JitterParams),
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub command: CommandKind,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub fail_on_discrepancy: bool,
    pub conv: Conventions,
    pub params: Params,
}

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub convention: Option<String>,
    pub fail_on_discrepancy: bool,
}

pub fn default_params(kind: CommandKind) -> Params {
    match kind {
        CommandKind::Algebra | CommandKind::All => Params::Empty,
        CommandKind::Dispersion | CommandKind::Dirac => Params::Scan(ScanParams::default()),
        CommandKind::Geodesic => Params::Geodesic(GeodesicParams::default()),
        CommandKind::Action => Params::Action(ActionParams::default()),
        CommandKind::Maxwell => Params::Maxwell(MaxwellParams::default()),
        CommandKind::Evolve => Params::Evolve(EvolveParams::default()),
        CommandKind::Jitter => Params::Jitter(JitterParams::default()),
    }
}

impl Scenario {
    /// Effective parameters, defaults filled, as a sorted JSON map.
    /// Excludes the output directory so reports stay relocation-stable.
    pub fn parameters_echo(&self) -> Value {
        let mut m = Map::new();
        match &self.params {
            Params::Empty => {}
            Params::Scan(p) => {
                m.insert("v_min".into(), jnum(p.v_min));
                m.insert("v_max".into(), jnum(p.v_max));
                m.insert("count".into(), Value::from(p.count as u64));
                if let Some(vs) = &p.velocities {
                    m.insert(
                        "velocities".into(),
                        Value::Array(vs.iter().map(|&v| jnum(v)).collect()),
                    );
                }
                if self.command == CommandKind::Dirac {
                    m.insert("tol".into(), jnum(p.tol));
                }
            }
            Params::Geodesic(p) => {
                if let Some(g) = &p.g_tt {
                    m.insert("g_tt".into(), Value::String(g.clone()));
                }
                m.insert("g_xx".into(), Value::String(p.g_xx.clone()));
                m.insert("x0".into(), jnum(p.x0));
                m.insert("v0".into(), jnum(p.v0));
                m.insert("tau_end".into(), jnum(p.tau_end));
                m.insert("dtau".into(), jnum(p.dtau));
            }
            Params::Action(p) => {
                if let Some(v) = &p.potential {
                    m.insert("potential".into(), Value::String(v.clone()));
                }
                m.insert("start_t".into(), jnum(p.start_t));
                m.insert("start_x".into(), jnum(p.start_x));
                m.insert("end_t".into(), jnum(p.end_t));
                m.insert("end_x".into(), jnum(p.end_x));
                m.insert("n_intervals".into(), Value::from(p.n_intervals as u64));
                m.insert(
                    "n_perturbations".into(),
                    Value::from(p.n_perturbations as u64),
                );
                m.insert("amplitude".into(), jnum(p.amplitude));
            }
            Params::Maxwell(p) => {
                m.insert("n".into(), Value::from(p.n as u64));
                m.insert("courant".into(), jnum(p.courant));
                m.insert("width_cells".into(), jnum(p.width_cells));
                m.insert("long_run_steps".into(), Value::from(p.long_run_steps as u64));
            }
            Params::Evolve(p) => {
                m.insert("equation".into(), Value::String(p.equation.as_str().into()));
                m.insert("n".into(), Value::from(p.n as u64));
                m.insert("length".into(), jnum(p.length));
                m.insert("x_center".into(), jnum(p.x_center));
                m.insert("width".into(), jnum(p.width));
                m.insert("v_center".into(), jnum(p.v_center));
                m.insert("dt".into(), jnum(p.dt));
                m.insert("steps".into(), Value::from(p.steps as u64));
                m.insert(
                    "kinetic".into(),
                    Value::String(if p.half_kinetic { "half" } else { "full" }.into()),
                );
                m.insert("rest_term".into(), Value::Bool(p.rest_term));
                m.insert("record_every".into(), Value::from(p.record_every as u64));
            }
            Params::Jitter(p) => {
                m.insert(
                    "velocities".into(),
                    Value::Array(p.velocities.iter().map(|&v| jnum(v)).collect()),
                );
                m.insert("electron".into(), Value::Bool(p.electron));
            }
        }
        Value::Object(m)
    }
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

fn field_f64(map: &Map<String, Value>, prefix: &str, key: &str, errors: &mut Vec<String>) -> Option<f64> {
    match map.get(key) {
        None => None,
        Some(v) => match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                errors.push(format!("{prefix}{key}: expected a finite number, got {v}"));
                None
            }
        },
    }
}

fn field_usize(map: &Map<String, Value>, prefix: &str, key: &str, errors: &mut Vec<String>) -> Option<usize> {
    match map.get(key) {
        None => None,
        Some(v) => match v.as_u64() {
            Some(x) => Some(x as usize),
            None => {
                errors.push(format!("{prefix}{key}: expected a non-negative integer, got {v}"));
                None
            }
        },
    }
}

fn field_str<'a>(
    map: &'a Map<String, Value>,
    prefix: &str,
    key: &str,
    errors: &mut Vec<String>,
) -> Option<&'a str> {
    match map.get(key) {
        None => None,
        Some(Value::String(s)) => Some(s.as_str()),
        Some(v) => {
            errors.push(format!("{prefix}{key}: expected a string, got {v}"));
            None
        }
    }
}

fn field_bool(map: &Map<String, Value>, prefix: &str, key: &str, errors: &mut Vec<String>) -> Option<bool> {
    match map.get(key) {
        None => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(v) => {
            errors.push(format!("{prefix}{key}: expected true or false, got {v}"));
            None
        }
    }
}

fn field_f64_array(
    map: &Map<String, Value>,
    prefix: &str,
    key: &str,
    errors: &mut Vec<String>,
) -> Option<Vec<f64>> {
    match map.get(key) {
        None => None,
        Some(Value::Array(items)) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                match item.as_f64() {
                    Some(x) if x.is_finite() => out.push(x),
                    _ => errors.push(format!(
                        "{prefix}{key}[{i}]: expected a finite number, got {item}"
                    )),
                }
            }
            Some(out)
        }
        Some(v) => {
            errors.push(format!("{prefix}{key}: expected an array of numbers, got {v}"));
            None
        }
    }
}

fn reject_unknown(map: &Map<String, Value>, allowed: &[&str], prefix: &str, errors: &mut Vec<String>) {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            errors.push(format!("unknown key \"{prefix}{key}\""));
        }
    }
}

fn guard_velocity_field(v: f64, conv: &Conventions, prefix: &str, key: &str, errors: &mut Vec<String>) {
    if v.abs() >= conv.max_speed() {
        errors.push(format!(
            "{prefix}{key}: velocity {v} violates the velocity guard (|v| must stay below {})",
            conv.max_speed()
        ));
    }
}

fn sign_field(
    map: &Map<String, Value>,
    prefix: &str,
    key: &str,
    errors: &mut Vec<String>,
) -> Option<Sign> {
    let text = field_str(map, prefix, key, errors)?;
    match Sign::parse(text) {
        Some(s) => Some(s),
        None => {
            errors.push(format!(
                "{prefix}{key}: expected \"+1\" or \"-1\", got \"{text}\""
            ));
            None
        }
    }
}

fn conventions_from(map: Option<&Map<String, Value>>, errors: &mut Vec<String>) -> Conventions {
    let mut conv = Conventions::default();
    let Some(map) = map else { return conv };
    reject_unknown(
        map,
        &["c", "hbar_m", "energy_sign", "spatial_sign", "velocity_guard"],
        "conventions.",
        errors,
    );
    if let Some(c) = field_f64(map, "conventions.", "c", errors) {
        if c > 0.0 {
            conv.c = c;
        } else {
            errors.push(format!("conventions.c: must be positive, got {c}"));
        }
    }
    if let Some(h) = field_f64(map, "conventions.", "hbar_m", errors) {
        if h > 0.0 {
            conv.hbar_m = h;
        } else {
            errors.push(format!("conventions.hbar_m: must be positive, got {h}"));
        }
    }
    if let Some(s) = sign_field(map, "conventions.", "energy_sign", errors) {
        conv.energy_sign = s;
    }
    if let Some(s) = sign_field(map, "conventions.", "spatial_sign", errors) {
        conv.spatial_sign = s;
    }
    if let Some(g) = field_f64(map, "conventions.", "velocity_guard", errors) {
        if g > 0.0 && g <= 1.0 {
            conv.velocity_guard = g;
        } else {
            errors.push(format!(
                "conventions.velocity_guard: must lie in (0, 1], got {g}"
            ));
        }
    }
    conv
}

/// Parses "--convention eps=+1,s=-1" style overrides.
fn apply_convention_text(conv: &mut Conventions, text: &str, errors: &mut Vec<String>) {
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((key, value)) = part.split_once('=') else {
            errors.push(format!(
                "convention: expected key=value pairs like \"eps=+1,s=-1\", got \"{part}\""
            ));
            continue;
        };
        let Some(sign) = Sign::parse(value) else {
            errors.push(format!(
                "convention: {}: expected \"+1\" or \"-1\", got \"{}\"",
                key.trim(),
                value.trim()
            ));
            continue;
        };
        match key.trim() {
            "eps" | "energy" => conv.energy_sign = sign,
            "s" | "spatial" => conv.spatial_sign = sign,
            other => errors.push(format!(
                "convention: unknown sign key \"{other}\" (expected eps or s)"
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Per-command parameter validation
// ---------------------------------------------------------------------------

fn scan_params(
    map: Option<&Map<String, Value>>,
    with_tol: bool,
    conv: &Conventions,
    errors: &mut Vec<String>,
) -> ScanParams {
    let mut p = ScanParams::default();
    let Some(map) = map else { return p };
    let mut allowed = vec!["v_min", "v_max", "count", "velocities"];
    if with_tol {
        allowed.push("tol");
    }
    reject_unknown(map, &allowed, "parameters.", errors);
    if let Some(v) = field_f64(map, "parameters.", "v_min", errors) {
        if v > 0.0 {
            p.v_min = v;
        } else {
            errors.push(format!("parameters.v_min: must be positive, got {v}"));
        }
    }
    if let Some(v) = field_f64(map, "parameters.", "v_max", errors) {
        guard_velocity_field(v, conv, "parameters.", "v_max", errors);
        p.v_max = v;
    }
    if p.v_max <= p.v_min {
        errors.push(format!(
            "parameters.v_max: must exceed v_min ({} vs {})",
            p.v_max, p.v_min
        ));
    }
    if let Some(n) = field_usize(map, "parameters.", "count", errors) {
        if n >= 2 {
            p.count = n;
        } else {
            errors.push(format!("parameters.count: need at least 2 samples, got {n}"));
        }
    }
    if let Some(vs) = field_f64_array(map, "parameters.", "velocities", errors) {
        for (i, &v) in vs.iter().enumerate() {
            guard_velocity_field(v, conv, "parameters.", &format!("velocities[{i}]"), errors);
        }
        p.velocities = Some(vs);
    }
    if with_tol {
        if let Some(t) = field_f64(map, "parameters.", "tol", errors) {
            if t > 0.0 {
                p.tol = t;
            } else {
                errors.push(format!("parameters.tol: must be positive, got {t}"));
            }
        }
    }
    p
}

fn geodesic_params(
    map: Option<&Map<String, Value>>,
    conv: &Conventions,
    errors: &mut Vec<String>,
) -> GeodesicParams {
    let mut p = GeodesicParams::default();
    let Some(map) = map else { return p };
    reject_unknown(
        map,
        &["g_tt", "g_xx", "x0", "v0", "tau_end", "dtau"],
        "parameters.",
        errors,
    );
    if let Some(s) = field_str(map, "parameters.", "g_tt", errors) {
        p.g_tt = Some(s.to_string());
    }
    if let Some(s) = field_str(map, "parameters.", "g_xx", errors) {
        p.g_xx = s.to_string();
    }
    if let Some(expr) = &p.g_tt {
        if let Err(e) = relwave_core::metric::Metric1D::from_expressions(expr, &p.g_xx) {
            errors.push(format!("parameters.g_tt/g_xx: {e}"));
        }
    }
    if let Some(x) = field_f64(map, "parameters.", "x0", errors) {
        p.x0 = x;
    }
    if let Some(v) = field_f64(map, "parameters.", "v0", errors) {
        guard_velocity_field(v, conv, "parameters.", "v0", errors);
        p.v0 = v;
    }
    if let Some(t) = field_f64(map, "parameters.", "tau_end", errors) {
        if t > 0.0 {
            p.tau_end = t;
        } else {
            errors.push(format!("parameters.tau_end: must be positive, got {t}"));
        }
    }
    if let Some(d) = field_f64(map, "parameters.", "dtau", errors) {
        if d > 0.0 {
            p.dtau = d;
        } else {
            errors.push(format!("parameters.dtau: must be positive, got {d}"));
        }
    }
    p
}

fn action_params(
    map: Option<&Map<String, Value>>,
    conv: &Conventions,
    errors: &mut Vec<String>,
) -> ActionParams {
    let mut p = ActionParams::default();
    let Some(map) = map else { return p };
    reject_unknown(
        map,
        &[
            "potential",
            "start_t",
            "start_x",
            "end_t",
            "end_x",
            "n_intervals",
            "n_perturbations",
            "amplitude",
        ],
        "parameters.",
        errors,
    );
    if let Some(s) = field_str(map, "parameters.", "potential", errors) {
        if let Err(e) = relwave_core::action::Potential1D::from_expression(s) {
            errors.push(format!("parameters.potential: {e}"));
        }
        p.potential = Some(s.to_string());
    }
    if let Some(v) = field_f64(map, "parameters.", "start_t", errors) {
        p.start_t = v;
    }
    if let Some(v) = field_f64(map, "parameters.", "start_x", errors) {
        p.start_x = v;
    }
    if let Some(v) = field_f64(map, "parameters.", "end_t", errors) {
        p.end_t = v;
    }
    if let Some(v) = field_f64(map, "parameters.", "end_x", errors) {
        p.end_x = v;
    }
    if p.end_t <= p.start_t {
        errors.push(format!(
            "parameters.end_t: must exceed start_t ({} vs {})",
            p.end_t, p.start_t
        ));
    } else {
        let mean_v = (p.end_x - p.start_x) / (p.end_t - p.start_t);
        guard_velocity_field(mean_v, conv, "parameters.", "end_x (mean velocity)", errors);
    }
    if let Some(n) = field_usize(map, "parameters.", "n_intervals", errors) {
        if n >= 2 {
            p.n_intervals = n;
        } else {
            errors.push(format!("parameters.n_intervals: need at least 2, got {n}"));
        }
    }
    if let Some(n) = field_usize(map, "parameters.", "n_perturbations", errors) {
        if n >= 1 {
            p.n_perturbations = n;
        } else {
            errors.push("parameters.n_perturbations: need at least 1".to_string());
        }
    }
    if let Some(a) = field_f64(map, "parameters.", "amplitude", errors) {
        if a > 0.0 {
            p.amplitude = a;
        } else {
            errors.push(format!("parameters.amplitude: must be positive, got {a}"));
        }
    }
    p
}

fn maxwell_params(map: Option<&Map<String, Value>>, errors: &mut Vec<String>) -> MaxwellParams {
    let mut p = MaxwellParams::default();
    let Some(map) = map else { return p };
    reject_unknown(
        map,
        &["n", "courant", "width_cells", "long_run_steps"],
        "parameters.",
        errors,
    );
    if let Some(n) = field_usize(map, "parameters.", "n", errors) {
        if n >= 64 {
            p.n = n;
        } else {
            errors.push(format!("parameters.n: need at least 64 grid points, got {n}"));
        }
    }
    if let Some(c) = field_f64(map, "parameters.", "courant", errors) {
        if c > 0.0 && c <= 1.0 {
            p.courant = c;
        } else {
            errors.push(format!(
                "parameters.courant: Courant number must lie in (0, 1], got {c}"
            ));
        }
    }
    if let Some(w) = field_f64(map, "parameters.", "width_cells", errors) {
        if w >= 4.0 {
            p.width_cells = w;
        } else {
            errors.push(format!(
                "parameters.width_cells: pulse needs at least 4 cells of width, got {w}"
            ));
        }
    }
    if let Some(s) = field_usize(map, "parameters.", "long_run_steps", errors) {
        if s >= 100 {
            p.long_run_steps = s;
        } else {
            errors.push(format!(
                "parameters.long_run_steps: need at least 100 steps, got {s}"
            ));
        }
    }
    p
}

fn evolve_params(
    map: Option<&Map<String, Value>>,
    conv: &Conventions,
    errors: &mut Vec<String>,
) -> EvolveParams {
    let mut p = EvolveParams::default();
    let Some(map) = map else { return p };
    reject_unknown(
        map,
        &[
            "equation",
            "n",
            "length",
            "x_center",
            "width",
            "v_center",
            "dt",
            "steps",
            "kinetic",
            "rest_term",
            "record_every",
        ],
        "parameters.",
        errors,
    );
    if let Some(s) = field_str(map, "parameters.", "equation", errors) {
        match s {
            "scalar" => p.equation = EquationKind::Scalar,
            "pair" => p.equation = EquationKind::Pair,
            "both" => p.equation = EquationKind::Both,
            other => errors.push(format!(
                "parameters.equation: expected scalar, pair, or both, got \"{other}\""
            )),
        }
    }
    if let Some(n) = field_usize(map, "parameters.", "n", errors) {
        if n >= 16 {
            p.n = n;
        } else {
            errors.push(format!("parameters.n: need at least 16 grid points, got {n}"));
        }
    }
    if let Some(l) = field_f64(map, "parameters.", "length", errors) {
        if l > 0.0 {
            p.length = l;
        } else {
            errors.push(format!("parameters.length: must be positive, got {l}"));
        }
    }
    if let Some(x) = field_f64(map, "parameters.", "x_center", errors) {
        p.x_center = x;
    }
    if let Some(w) = field_f64(map, "parameters.", "width", errors) {
        if w > 0.0 {
            p.width = w;
        } else {
            errors.push(format!("parameters.width: must be positive, got {w}"));
        }
    }
    if let Some(v) = field_f64(map, "parameters.", "v_center", errors) {
        guard_velocity_field(v, conv, "parameters.", "v_center", errors);
        p.v_center = v;
    }
    if let Some(d) = field_f64(map, "parameters.", "dt", errors) {
        if d > 0.0 {
            p.dt = d;
        } else {
            errors.push(format!("parameters.dt: must be positive, got {d}"));
        }
    }
    if let Some(s) = field_usize(map, "parameters.", "steps", errors) {
        if s >= 1 {
            p.steps = s;
        } else {
            errors.push("parameters.steps: need at least 1".to_string());
        }
    }
    if let Some(s) = field_str(map, "parameters.", "kinetic", errors) {
        match s {
            "full" => p.half_kinetic = false,
            "half" => p.half_kinetic = true,
            other => errors.push(format!(
                "parameters.kinetic: expected full or half, got \"{other}\""
            )),
        }
    }
    if let Some(b) = field_bool(map, "parameters.", "rest_term", errors) {
        p.rest_term = b;
    }
    if let Some(r) = field_usize(map, "parameters.", "record_every", errors) {
        if r >= 1 {
            p.record_every = r;
        } else {
            errors.push("parameters.record_every: need at least 1".to_string());
        }
    }
    // Cross-field resolution checks, only when the fields themselves parsed.
    let dx = p.length / p.n as f64;
    if p.width < 4.0 * dx {
        errors.push(format!(
            "parameters.width: packet width {} under-resolved, needs at least 4*dx = {}",
            p.width,
            4.0 * dx
        ));
    }
    if p.x_center.abs() >= p.length / 2.0 {
        errors.push(format!(
            "parameters.x_center: {} lies outside the domain (-{1}, {1})",
            p.x_center,
            p.length / 2.0
        ));
    }
    if p.v_center.abs() < conv.max_speed() {
        if let Ok(kin) = Kinematics::from_velocity(p.v_center, conv) {
            let reach = (kin.p.abs() / conv.hbar_m + 1.5 / p.width) * dx;
            if reach > std::f64::consts::PI {
                errors.push(format!(
                    "parameters.v_center: carrier momentum plus envelope spread reaches {reach:.4} rad per cell, beyond the alias limit pi; refine n"
                ));
            }
        }
    }
    p
}

fn jitter_params(
    map: Option<&Map<String, Value>>,
    conv: &Conventions,
    errors: &mut Vec<String>,
) -> JitterParams {
    let mut p = JitterParams::default();
    let Some(map) = map else { return p };
    reject_unknown(map, &["velocities", "electron"], "parameters.", errors);
    if let Some(vs) = field_f64_array(map, "parameters.", "velocities", errors) {
        for (i, &v) in vs.iter().enumerate() {
            if v <= 0.0 {
                errors.push(format!(
                    "parameters.velocities[{i}]: must be positive (the oscillation period diverges at rest), got {v}"
                ));
            } else {
                guard_velocity_field(v, conv, "parameters.", &format!("velocities[{i}]"), errors);
            }
        }
        p.velocities = vs;
    }
    if let Some(b) = field_bool(map, "parameters.", "electron", errors) {
        p.electron = b;
    }
    p
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn parse_file(path: &Path) -> Result<Value, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ConfigError::single(format!("cannot read {}: {e}", path.display()))
    })?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false);
    if is_json {
        serde_json::from_str(&text).map_err(|e| {
            ConfigError::single(format!("{}: invalid JSON: {e}", path.display()))
        })
    } else {
        let toml_value: toml::Value = toml::from_str(&text).map_err(|e| {
            ConfigError::single(format!("{}: invalid TOML: {e}", path.display()))
        })?;
        serde_json::to_value(toml_value)
            .map_err(|e| ConfigError::single(format!("{}: {e}", path.display())))
    }
}

/// Loads, validates, and applies overrides. Every problem found is
/// reported; none aborts the scan early.
pub fn build_scenario(
    kind: CommandKind,
    file: Option<&Path>,
    overrides: &Overrides,
) -> Result<Scenario, ConfigError> {
    let mut errors = Vec::new();
    let mut name = kind.name().to_string();
    let mut seed = 0u64;
    let mut output_dir = None;
    let mut fail_on_discrepancy = false;
    let mut conv = Conventions::default();
    let mut params = default_params(kind);

    if let Some(path) = file {
        let root = parse_file(path)?;
        let Some(map) = root.as_object() else {
            return Err(ConfigError::single(format!(
                "{}: top level must be a table/object",
                path.display()
            )));
        };
        reject_unknown(
            map,
            &[
                "name",
                "command",
                "seed",
                "output_dir",
                "fail_on_discrepancy",
                "conventions",
                "parameters",
            ],
            "",
            &mut errors,
        );
        if let Some(s) = field_str(map, "", "name", &mut errors) {
            name = s.to_string();
        }
        if let Some(s) = field_str(map, "", "command", &mut errors) {
            match CommandKind::parse(s) {
                Some(declared) if declared == kind => {}
                Some(declared) => errors.push(format!(
                    "command: scenario declares \"{}\" but \"{}\" was invoked",
                    declared.name(),
                    kind.name()
                )),
                None => errors.push(format!("command: unknown command \"{s}\"")),
            }
        }
        if let Some(s) = map.get("seed") {
            match s.as_u64() {
                Some(v) => seed = v,
                None => errors.push(format!("seed: expected a non-negative integer, got {s}")),
            }
        }
        if let Some(s) = field_str(map, "", "output_dir", &mut errors) {
            output_dir = Some(PathBuf::from(s));
        }
        if let Some(b) = field_bool(map, "", "fail_on_discrepancy", &mut errors) {
            fail_on_discrepancy = b;
        }
        let conv_map = match map.get("conventions") {
            None => None,
            Some(v) => match v.as_object() {
                Some(m) => Some(m),
                None => {
                    errors.push("conventions: expected a table/object".to_string());
                    None
                }
            },
        };
        conv = conventions_from(conv_map, &mut errors);
        if let Some(text) = &overrides.convention {
            apply_convention_text(&mut conv, text, &mut errors);
        }
        let param_map = match map.get("parameters") {
            None => None,
            Some(v) => match v.as_object() {
                Some(m) => Some(m),
                None => {
                    errors.push("parameters: expected a table/object".to_string());
                    None
                }
            },
        };
        params = match kind {
            CommandKind::Algebra | CommandKind::All => {
                if let Some(m) = param_map {
                    reject_unknown(m, &[], "parameters.", &mut errors);
                }
                Params::Empty
            }
            CommandKind::Dispersion => Params::Scan(scan_params(param_map, false, &conv, &mut errors)),
            CommandKind::Dirac => Params::Scan(scan_params(param_map, true, &conv, &mut errors)),
            CommandKind::Geodesic => Params::Geodesic(geodesic_params(param_map, &conv, &mut errors)),
            CommandKind::Action => Params::Action(action_params(param_map, &conv, &mut errors)),
            CommandKind::Maxwell => Params::Maxwell(maxwell_params(param_map, &mut errors)),
            CommandKind::Evolve => Params::Evolve(evolve_params(param_map, &conv, &mut errors)),
            CommandKind::Jitter => Params::Jitter(jitter_params(param_map, &conv, &mut errors)),
        };
    } else if let Some(text) = &overrides.convention {
        apply_convention_text(&mut conv, text, &mut errors);
    }

    if let Some(s) = overrides.seed {
        seed = s;
    }
    if overrides.fail_on_discrepancy {
        fail_on_discrepancy = true;
    }

    if errors.is_empty() {
        Ok(Scenario {
            name,
            command: kind,
            seed,
            output_dir,
            fail_on_discrepancy,
            conv,
            params,
        })
    } else {
        Err(ConfigError { messages: errors })
    }
}
