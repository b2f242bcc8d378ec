//! Acceptance gate: one test per release criterion, numbered 01–10.
//!
//! Each test prints exactly one `criterion NN: PASS/FAIL — title` line
//! (visible under `--nocapture`, and always shown for failures) and panics
//! with the collected evidence when its criterion is not met, so
//! `cargo test --test acceptance` is the go/no-go switch for the
//! workbench. Thresholds are stated inline next to each requirement.

use num_complex::Complex64;
use relwave_core::action::{
    least_action_check, stationary_path, LeastActionSetup, Potential1D,
};
use relwave_core::algebra::{algebra_check, decomposition_check, DiracAssignment};
use relwave_core::evolve::{
    build_packet, linear_fit, plane_wave_pair, DiracStepper, PacketSpec, SchrodingerStepper,
};
use relwave_core::geodesic::integrate;
use relwave_core::jitter::{electron_rest_amplitude, jitter_amplitude};
use relwave_core::maxwell::{
    null_decomposition_check, standard_null_pair, wave_equation_residual, Boundary,
    StaggeredField,
};
use relwave_core::metric::Metric1D;
use relwave_core::planewave::{
    dispersion_scan, kinematic_pair_residual_closed_form, log_log_slope, OperatorForm,
};
use relwave_core::spinor::{
    determinant_condition, on_shell_spinor, ratio_magnitude_closed_form,
};
use relwave_core::{Conventions, Kinematics, Sign};
use std::path::Path;
use std::process::Command;
use std::time::Instant;
use tempfile::TempDir;

// ---------------------------------------------------------------------------
// Reporting scaffold: collect requirement violations, emit one verdict line.
// ---------------------------------------------------------------------------

struct Criterion {
    id: &'static str,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    /// Requires |value| <= bound.
    fn bounded(&mut self, label: &str, value: f64, bound: f64) {
        self.require(
            value.abs() <= bound,
            format!("{label}: |{value:.6e}| exceeds {bound:.1e}"),
        );
    }

    /// Requires |value - center| <= half_width.
    fn windowed(&mut self, label: &str, value: f64, center: f64, half_width: f64) {
        self.require(
            (value - center).abs() <= half_width,
            format!("{label}: {value:.6e} outside {center} ± {half_width:.1e}"),
        );
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("criterion {}: PASS — {}", self.id, self.title);
        } else {
            println!("criterion {}: FAIL — {}", self.id, self.title);
            for f in &self.failures {
                println!("    {f}");
            }
            panic!(
                "criterion {} failed:\n{}",
                self.id,
                self.failures.join("\n")
            );
        }
    }
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn gaussian(center: f64, sigma: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| (-((x - center) * (x - center)) / (2.0 * sigma * sigma)).exp()
}

// ---------------------------------------------------------------------------
// 01 — exact matrix algebra
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_exact_algebra_identities() {
    let mut c = Criterion::new("01", "basis and decomposition identities hold exactly, under 1 s");
    let started = Instant::now();
    let basis = algebra_check();
    let massive = decomposition_check(&DiracAssignment::standard());
    let elapsed = started.elapsed();

    c.require(
        basis.all_hold(),
        format!(
            "basis identity set failed: {:?}",
            basis
                .checks
                .iter()
                .filter(|x| !x.holds)
                .map(|x| x.name.as_str())
                .collect::<Vec<_>>()
        ),
    );
    c.require(
        basis.cyclic_sign == -1 && basis.reversed_sign == 1,
        format!(
            "product phases: cyclic {} (want -1), reversed {} (want +1)",
            basis.cyclic_sign, basis.reversed_sign
        ),
    );
    c.require(
        massive.all_hold(),
        format!(
            "decomposition condition set failed: {:?}",
            massive
                .checks
                .iter()
                .filter(|x| !x.holds)
                .map(|x| x.name.as_str())
                .collect::<Vec<_>>()
        ),
    );
    c.require(
        elapsed.as_secs_f64() < 1.0,
        format!("exact verification took {:.3} s (budget 1 s)", elapsed.as_secs_f64()),
    );
    c.finish();
}

// ---------------------------------------------------------------------------
// 02 — coupled amplitude certificate across the velocity range
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_on_shell_amplitude_certificate() {
    let mut c = Criterion::new(
        "02",
        "determinant, phase quadrature, and ratio magnitudes certified over 50 velocities",
    );
    let conv = Conventions::default();
    for v in log_spaced(1e-3, 0.99, 50) {
        let kin = Kinematics::from_velocity(v, &conv).expect("velocity inside the guard");
        for e in [kin.e, -kin.e] {
            c.bounded(
                &format!("determinant condition at v={v:.6e}, E={e:.3e}"),
                determinant_condition(e, kin.p, Sign::Plus, &conv),
                1e-12,
            );
        }
        let plus = on_shell_spinor(&kin, Sign::Plus, Sign::Plus, &conv, 1e-12)
            .expect("positive-branch amplitudes");
        let minus = on_shell_spinor(&kin, Sign::Plus, Sign::Minus, &conv, 1e-12)
            .expect("negative-branch amplitudes");
        c.bounded(
            &format!("cross term, branch +, v={v:.6e}"),
            plus.cross_term(),
            1e-12,
        );
        c.bounded(
            &format!("cross term, branch -, v={v:.6e}"),
            minus.cross_term(),
            1e-12,
        );
        c.bounded(
            &format!("negative-branch magnitude vs v/(c(1+w)), v={v:.6e}"),
            minus.ratio().norm() - ratio_magnitude_closed_form(&kin, Sign::Minus, &conv),
            1e-12,
        );
        // Reciprocity is checked at 1e-9: forming |r+||r-| crosses a
        // 1/w^2 - 1 cancellation that costs ~3 digits at the small end.
        c.bounded(
            &format!("branch reciprocity |r+ r-| - 1, v={v:.6e}"),
            plus.ratio().norm() * minus.ratio().norm() - 1.0,
            1e-9,
        );
    }
    c.finish();
}

// ---------------------------------------------------------------------------
// 03 — dispersion ledger
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_dispersion_ledger() {
    let mut c = Criterion::new(
        "03",
        "nulling pair exact, kinematic-pair residual matches its closed form and scaling",
    );
    let grid = log_spaced(1e-3, 0.99, 50);
    for eps in [Sign::Plus, Sign::Minus] {
        let conv = Conventions {
            energy_sign: eps,
            ..Conventions::default()
        };
        let rows = dispersion_scan(&conv, &grid).expect("scan inside the guard");
        c.bounded(
            &format!("max nulling-pair residual (eps={eps})"),
            max_abs(rows.iter().map(|r| r.residual_nulling_pair)),
            1e-12,
        );
        c.bounded(
            &format!("max kinematic-pair residual minus closed form (eps={eps})"),
            max_abs(
                rows.iter()
                    .map(|r| r.residual_kinematic_pair - r.residual_closed_form),
            ),
            1e-12,
        );
    }

    let conv = Conventions::default();
    c.bounded(
        "closed-form discrepancy at v=0.6 vs -0.3125",
        kinematic_pair_residual_closed_form(0.6, &conv).expect("v=0.6 inside the guard")
            - (-0.3125),
        1e-12,
    );

    // Small-velocity scaling measured on 25 log-spaced points in [1e-3, 1e-1].
    // The closed form c^2/w - c^2/w^2 itself is second order in v; deferring
    // the mismatch to fourth order requires the halved kinetic term, so both
    // orders are pinned here.
    let small = log_spaced(1e-3, 1e-1, 25);
    let rows = dispersion_scan(&conv, &small).expect("scan inside the guard");
    let raw: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.v, r.residual_kinematic_pair))
        .collect();
    c.windowed("full kinetic-term residual order", log_log_slope(&raw), 2.0, 0.1);
    let half: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            let c2 = conv.c * conv.c;
            (r.v, r.e_kinematic - 0.5 * r.p * r.p - c2)
        })
        .collect();
    c.windowed(
        "halved kinetic-term residual order",
        log_log_slope(&half),
        4.0,
        0.1,
    );
    c.finish();
}

// ---------------------------------------------------------------------------
// 04 — geodesic conservation
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_geodesic_conservation() {
    let mut c = Criterion::new(
        "04",
        "interval and conserved quantity hold to 1e-8 over 1e4 steps; flat endpoint exact",
    );
    let conv = Conventions::default();

    let flat = integrate(&Metric1D::flat(), 0.0, 0.6, 10.0, 1e-3, &conv)
        .expect("flat trace integrates");
    c.bounded("flat interval residual max", flat.max_interval_residual, 1e-8);
    c.bounded("flat conserved drift max", flat.max_conserved_drift, 1e-8);
    let end = flat.endpoint();
    c.bounded("flat endpoint x vs 7.5", end.x - 7.5, 1e-8);
    c.bounded("flat endpoint t vs 12.5", end.t - 12.5, 1e-8);

    let curved = Metric1D::from_expressions("1 + 0.2*x", "1").expect("profile parses");
    let trace = integrate(&curved, 0.0, 0.0, 5.0, 5e-4, &conv).expect("curved trace integrates");
    c.bounded("curved interval residual max", trace.max_interval_residual, 1e-8);
    c.bounded("curved conserved drift max", trace.max_conserved_drift, 1e-8);
    c.finish();
}

// ---------------------------------------------------------------------------
// 05 — least action
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_least_action() {
    let mut c = Criterion::new(
        "05",
        "free reference action 0.18, all 100 perturbations above it, uniform-field parabola",
    );
    let conv = Conventions::default();
    let setup = LeastActionSetup {
        start: (0.0, 0.0),
        end: (1.0, 0.6),
        n_intervals: 200,
        n_perturbations: 100,
        amplitude: 0.02,
        seed: 7,
    };
    let report =
        least_action_check(&Potential1D::Free, &setup, &conv).expect("free action suite runs");
    c.bounded("free reference action vs 0.18", report.reference_action - 0.18, 1e-6);
    c.require(
        report.rows.len() == 100,
        format!("expected 100 perturbations, got {}", report.rows.len()),
    );
    c.require(
        report.all_strictly_larger,
        format!(
            "a perturbed path failed to raise the action (min excess {:.3e})",
            report.min_excess
        ),
    );

    let g = 0.5;
    let n = 200usize;
    let xs = stationary_path(&Potential1D::Linear { g }, (0.0, 0.0), (1.0, 0.3), n, 1e-9, 200)
        .expect("uniform-force relaxation converges");
    let v0 = 0.3 / 1.0 + g * 1.0 / 2.0;
    let dt = 1.0 / n as f64;
    let deviation = max_abs(xs.iter().enumerate().map(|(i, &x)| {
        let t = i as f64 * dt;
        x - (v0 * t - 0.5 * g * t * t)
    }));
    c.bounded("uniform-field path vs analytic parabola", deviation, 1e-6);
    c.finish();
}

// ---------------------------------------------------------------------------
// 06 — evolution conservation and transport
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_evolution_conservation() {
    let mut c = Criterion::new(
        "06",
        "scalar norm to 1e-10, pair norm to 1e-8, group velocity within 2% of dE/dp",
    );
    let conv = Conventions::default();

    // Scalar packet: 1000 implicit steps on a 1024-point line.
    let n = 1024usize;
    let length = 80.0;
    let dx = length / n as f64;
    let x0 = -length / 2.0;
    let spec = PacketSpec {
        x_center: -10.0,
        width: 2.0,
        v_center: 0.447_213_595_499_957_9,
        conv,
    };
    let mut field = build_packet(&spec, x0, dx, n).expect("packet fits the grid");
    let stepper = SchrodingerStepper::new(n, dx, 0.01, OperatorForm::PRIMARY, &conv)
        .expect("stable step");
    let kin = Kinematics::from_velocity(spec.v_center, &conv).expect("velocity inside the guard");
    let mut rows = vec![field.density_row()];
    for step in 1..=1000 {
        stepper.step(&mut field).expect("step");
        if step % 50 == 0 {
            rows.push(field.density_row());
        }
    }
    c.bounded(
        "scalar norm drift over 1000 steps",
        rows.last().expect("rows recorded").total - rows[0].total,
        1e-10,
    );
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let cs: Vec<f64> = rows.iter().map(|r| r.centroid).collect();
    let expected_vg = 2.0 * stepper.a_coefficient * (kin.p / conv.hbar_m);
    c.windowed(
        "scalar packet group velocity vs 2*A*k0",
        linear_fit(&ts, &cs).slope,
        expected_vg,
        0.02 * expected_vg.abs(),
    );

    // Coupled pair packet: 1000 unitary steps on a 256-point line.
    let n2 = 256usize;
    let dx2 = 0.5;
    let x02 = -(n2 as f64) * dx2 / 2.0;
    let kin06 = Kinematics::from_velocity(0.6, &conv).expect("velocity inside the guard");
    let sp = on_shell_spinor(&kin06, Sign::Plus, Sign::Plus, &conv, 1e-9)
        .expect("on-shell amplitudes");
    let envelope = gaussian(0.0, 2.0);
    let mut pair = plane_wave_pair(sp.u1, sp.u2, kin06.p, x02, dx2, n2, &conv)
        .expect("plane-wave pair on the grid");
    for i in 0..n2 {
        let window = envelope(x02 + i as f64 * dx2);
        pair.psi1[i] *= window;
        pair.psi2[i] *= window;
    }
    let scale = 1.0 / pair.norm();
    for v in pair.psi1.iter_mut().chain(pair.psi2.iter_mut()) {
        *v *= Complex64::new(scale, 0.0);
    }
    let stepper2 = DiracStepper::new(n2, dx2, 0.5 * dx2 / conv.c, &conv).expect("stable step");
    let norm0 = pair.norm();
    for _ in 0..1000 {
        stepper2.step(&mut pair).expect("step");
    }
    c.bounded("pair norm drift over 1000 steps", pair.norm() - norm0, 1e-8);
    c.finish();
}

// ---------------------------------------------------------------------------
// 07 — massless two-component limit
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_massless_limit() {
    let mut c = Criterion::new(
        "07",
        "pulse transit under 1% L2, energy to 1e-6 over 1e4 steps, order 2, exact decomposition",
    );
    let conv = Conventions::default();
    let cs = conv.c;

    let (a0, a1) = standard_null_pair();
    c.require(
        null_decomposition_check(&a0, &a1).all_hold(),
        "massless decomposition conditions failed in exact arithmetic".to_string(),
    );

    // One periodic transit of a Gaussian pulse at Courant 0.5 on 512 cells.
    let n = 512usize;
    let dx = 1.0;
    let dt = 0.5 * dx / cs;
    let length = n as f64 * dx;
    let f = gaussian(length / 2.0, 16.0 * dx);
    let mut field = StaggeredField::right_moving(&f, 0.0, dx, n, cs, dt).expect("launch fits");
    field.run((length / (cs * dt)).round() as usize);
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    for (i, &v) in field.psi2().iter().enumerate() {
        let e = f(i as f64 * dx) - v;
        err2 += e * e;
        ref2 += f(i as f64 * dx).powi(2);
    }
    c.bounded("relative L2 shape error after one transit", (err2 / ref2).sqrt(), 0.01);

    // Energy drift sampled every 100 of 10^4 steps.
    let f_wide = gaussian(length / 2.0, 32.0 * dx);
    let mut field = StaggeredField::right_moving(&f_wide, 0.0, dx, n, cs, dt).expect("launch fits");
    let e0 = field.energy();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        field.run(100);
        worst = worst.max(((field.energy() - e0) / e0).abs());
    }
    c.bounded("relative energy drift over 1e4 steps", worst, 1e-6);

    // Residual refinement order on slices two steps apart (adjacent slices
    // satisfy the discrete wave identity exactly and measure nothing).
    let residual_at = |n: usize| -> f64 {
        let dx = 1.0 / n as f64;
        let dt = 0.5 * dx / cs;
        let mut field = StaggeredField::standing(3, 0.0, dx, n, cs, dt).expect("mode fits");
        let mut slices = Vec::new();
        for _ in 0..3 {
            slices.push(field.psi2().to_vec());
            field.run(2);
        }
        let res = wave_equation_residual(
            &slices[0],
            &slices[1],
            &slices[2],
            dx,
            2.0 * dt,
            cs,
            Boundary::Periodic,
        )
        .expect("aligned slices");
        max_abs(res)
    };
    c.windowed(
        "wave-equation residual order (128 vs 256)",
        (residual_at(128) / residual_at(256)).log2(),
        2.0,
        0.1,
    );
    c.finish();
}

// ---------------------------------------------------------------------------
// 08 — jitter amplitude
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_jitter_amplitude() {
    let mut c = Criterion::new(
        "08",
        "amplitude equals 2h/(c(1+w)) with rest limit h/c; electron scale within 0.1%",
    );
    let conv = Conventions::default();
    for v in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        let kin = Kinematics::from_velocity(v, &conv).expect("velocity inside the guard");
        let amp = jitter_amplitude(v, &conv).expect("amplitude");
        c.bounded(
            &format!("amplitude vs closed form at v={v}"),
            amp - 2.0 * conv.hbar_m / (conv.c * (1.0 + kin.w)),
            1e-12,
        );
    }
    c.bounded(
        "rest-limit amplitude vs h/c",
        jitter_amplitude(1e-8, &conv).expect("amplitude") - conv.hbar_m / conv.c,
        1e-12,
    );
    let expected = 3.8616e-13;
    c.windowed(
        "electron rest amplitude (m)",
        electron_rest_amplitude(),
        expected,
        1e-3 * expected,
    );
    c.finish();
}

// ---------------------------------------------------------------------------
// 09 — measured-discrepancy ledger populated, run still green
// ---------------------------------------------------------------------------

fn run_all_into(dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_relwave"))
        .env_remove("RELWAVE_OUTPUT")
        .args(["all", "--seed", "7", "--output"])
        .arg(dir)
        .output()
        .expect("binary spawns")
}

#[test]
fn criterion_09_discrepancy_ledger_populated() {
    let mut c = Criterion::new(
        "09",
        "full run records the three documented discrepancies with evidence and exits 0",
    );
    let tmp = TempDir::new().unwrap();
    let out = run_all_into(tmp.path());
    c.require(
        out.status.code() == Some(0),
        format!(
            "expected exit 0, got {:?}; stderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ),
    );

    let body = std::fs::read_to_string(tmp.path().join("report.json")).expect("report.json");
    let report: serde_json::Value = serde_json::from_str(&body).expect("report parses");
    let checks = report["checks"].as_array().expect("checks array");
    let discrepancies: Vec<&serde_json::Value> = checks
        .iter()
        .filter(|x| x["verdict"] == "measured-discrepancy")
        .collect();
    c.require(
        discrepancies.len() >= 3,
        format!("expected at least 3 recorded discrepancies, got {}", discrepancies.len()),
    );
    for d in &discrepancies {
        let value = d["value"].as_f64();
        c.require(
            value.is_some_and(f64::is_finite),
            format!("discrepancy {} lacks finite numeric evidence", d["name"]),
        );
    }
    for needle in [
        "kinematic pair off the operator shell",
        "branch ratio magnitudes split",
        "rest-term phase after eliminating",
    ] {
        c.require(
            discrepancies
                .iter()
                .any(|d| d["name"].as_str().is_some_and(|s| s.contains(needle))),
            format!("no recorded discrepancy mentions \"{needle}\""),
        );
    }
    c.finish();
}

// ---------------------------------------------------------------------------
// 10 — determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_byte_identical_reruns() {
    let mut c = Criterion::new("10", "two seeded full runs produce byte-identical artifacts");
    let first = TempDir::new().unwrap();
    let second = TempDir::new().unwrap();
    for dir in [first.path(), second.path()] {
        let out = run_all_into(dir);
        c.require(
            out.status.code() == Some(0),
            format!(
                "full run into {} exited {:?}",
                dir.display(),
                out.status.code()
            ),
        );
    }

    let listing = |dir: &Path| -> Vec<String> {
        let mut names: Vec<String> = std::fs::read_dir(dir)
            .expect("output directory readable")
            .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        names
    };
    let names = listing(first.path());
    c.require(
        names == listing(second.path()),
        "the two runs emitted different file sets".to_string(),
    );
    c.require(
        names.len() >= 10,
        format!("expected the full artifact set, found only {} files", names.len()),
    );
    for name in &names {
        let a = std::fs::read(first.path().join(name)).expect("artifact readable");
        let b = std::fs::read(second.path().join(name)).expect("artifact readable");
        c.require(a == b, format!("{name} differs between the two runs"));
    }
    c.finish();
}
