//! Phase accumulation along world lines and least-action verification.
//!
//! A world line carries (t, x, v) samples with fixed endpoints. The phase
//! integrals split into a temporal part −∫(c²/w − V)/ħ̃ dt and a spatial
//! part s·∫(v/w)·v/ħ̃ dt, both accumulated by the trapezoid rule, which
//! keeps concatenation additive by construction.
//!
//! The least-action side works on uniform time grids with the midpoint
//! discrete Lagrangian
//!
//! ```text
//! S = Σ dt·[ ½((x_{k+1} − x_k)/dt)² − ½(V(x_k) + V(x_{k+1})) ]
//! ```
//!
//! whose stationarity condition is the discrete Euler–Lagrange equation
//! (x_{k+1} − 2x_k + x_{k−1})/dt² = −V′(x_k). Solving that equation for
//! the reference path makes "every fixed-endpoint perturbation increases
//! the action" an exact statement for convex kinetic energy, not a
//! numerical accident: the first variation vanishes at the discrete
//! stationary point, and the kinetic Hessian is positive definite.

use crate::conventions::Conventions;
use crate::expr::{Expr, ExprError};
use crate::kinematics::{guard_velocity, lorentz_factor};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("world line needs at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("sample times must increase strictly (violated at index {index})")]
    NonMonotonicTime { index: usize },
    #[error("non-finite {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },
    #[error("velocity {v} at t = {t} is not timelike (|v| must stay below {limit})")]
    NotTimelike { t: f64, v: f64, limit: f64 },
    #[error("potential {v_at_x} meets or exceeds total energy {total} at t = {t}")]
    NegativeEnergy { t: f64, v_at_x: f64, total: f64 },
    #[error("stationary-path relaxation failed after {iterations} iterations (residual {residual:e})")]
    RelaxationFailure { iterations: usize, residual: f64 },
    #[error("time step must be positive and finite, got {value}")]
    BadStep { value: f64 },
    #[error(transparent)]
    Potential(#[from] ExprError),
}

/// One world-line node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

/// Time-ordered trajectory with per-node velocity.
#[derive(Debug, Clone)]
pub struct WorldLine {
    samples: Vec<Sample>,
}

impl WorldLine {
    pub fn from_samples(samples: Vec<Sample>) -> Result<WorldLine, ActionError> {
        if samples.len() < 2 {
            return Err(ActionError::TooFewSamples {
                need: 2,
                got: samples.len(),
            });
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.t.is_finite() && s.x.is_finite() && s.v.is_finite()) {
                return Err(ActionError::NonFinite {
                    what: "sample",
                    t: s.t,
                });
            }
            if i > 0 && samples[i - 1].t >= s.t {
                return Err(ActionError::NonMonotonicTime { index: i });
            }
        }
        Ok(WorldLine { samples })
    }

    /// Constant-velocity line from (t0, x0) to (t1, x1) on n_nodes nodes.
    pub fn straight(
        t0: f64,
        x0: f64,
        t1: f64,
        x1: f64,
        n_nodes: usize,
    ) -> Result<WorldLine, ActionError> {
        if n_nodes < 2 {
            return Err(ActionError::TooFewSamples {
                need: 2,
                got: n_nodes,
            });
        }
        if !(t1 > t0) {
            return Err(ActionError::NonMonotonicTime { index: 1 });
        }
        let v = (x1 - x0) / (t1 - t0);
        let samples = (0..n_nodes)
            .map(|i| {
                let frac = i as f64 / (n_nodes - 1) as f64;
                Sample {
                    t: t0 + frac * (t1 - t0),
                    x: x0 + frac * (x1 - x0),
                    v,
                }
            })
            .collect();
        WorldLine::from_samples(samples)
    }

    /// Uniform-grid positions with velocities filled in by central
    /// differences (one-sided at the ends).
    pub fn from_positions(t0: f64, dt: f64, xs: &[f64]) -> Result<WorldLine, ActionError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(ActionError::BadStep { value: dt });
        }
        if xs.len() < 2 {
            return Err(ActionError::TooFewSamples {
                need: 2,
                got: xs.len(),
            });
        }
        let n = xs.len();
        let samples = (0..n)
            .map(|i| {
                let v = if i == 0 {
                    (xs[1] - xs[0]) / dt
                } else if i == n - 1 {
                    (xs[n - 1] - xs[n - 2]) / dt
                } else {
                    (xs[i + 1] - xs[i - 1]) / (2.0 * dt)
                };
                Sample {
                    t: t0 + i as f64 * dt,
                    x: xs[i],
                    v,
                }
            })
            .collect();
        WorldLine::from_samples(samples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn duration(&self) -> f64 {
        self.samples[self.samples.len() - 1].t - self.samples[0].t
    }
}

/// Static per-unit-mass potential V(x) in velocity² units.
#[derive(Debug, Clone)]
pub enum Potential1D {
    Free,
    /// V(x) = g·x.
    Linear { g: f64 },
    /// Closed-form V with precomputed first and second derivatives.
    Custom { v: Expr, dv: Expr, ddv: Expr },
}

impl Potential1D {
    pub fn from_expression(text: &str) -> Result<Potential1D, ActionError> {
        let v = Expr::parse(text)?;
        let dv = v.derivative()?.simplified();
        let ddv = dv.derivative()?.simplified();
        Ok(Potential1D::Custom { v, dv, ddv })
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential1D::Free => 0.0,
            Potential1D::Linear { g } => g * x,
            Potential1D::Custom { v, .. } => v.eval(x),
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match self {
            Potential1D::Free => 0.0,
            Potential1D::Linear { g } => *g,
            Potential1D::Custom { dv, .. } => dv.eval(x),
        }
    }

    pub fn curvature(&self, x: f64) -> f64 {
        match self {
            Potential1D::Free | Potential1D::Linear { .. } => 0.0,
            Potential1D::Custom { ddv, .. } => ddv.eval(x),
        }
    }
}

/// Accumulated phases and actions along one world line.
///
/// `action` integrates the Newtonian Lagrangian ½v² − V; `action_relativistic`
/// integrates c²/w − c² − V, so the identity
/// phi_temporal = −(c²·T + action_relativistic)/ħ̃ holds to rounding.
#[derive(Debug, Clone, Copy)]
pub struct PhaseBreakdown {
    pub phi_temporal: f64,
    pub phi_spatial: f64,
    pub phi_total: f64,
    pub action: f64,
    pub action_relativistic: f64,
}

fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, f)| 0.5 * (f[0] + f[1]) * (t[1] - t[0]))
        .sum()
}

/// Trapezoidal phase and action accumulation along a world line.
pub fn phase_along(
    line: &WorldLine,
    pot: &Potential1D,
    conv: &Conventions,
) -> Result<PhaseBreakdown, ActionError> {
    let c2 = conv.c * conv.c;
    let n = line.samples().len();
    let mut times = Vec::with_capacity(n);
    let mut temporal = Vec::with_capacity(n);
    let mut spatial = Vec::with_capacity(n);
    let mut lagrangian = Vec::with_capacity(n);
    let mut relativistic = Vec::with_capacity(n);
    for s in line.samples() {
        guard_velocity(s.v, conv).map_err(|_| ActionError::NotTimelike {
            t: s.t,
            v: s.v,
            limit: conv.max_speed(),
        })?;
        let w = lorentz_factor(s.v, conv).expect("guard already passed");
        let v_at_x = pot.value(s.x);
        if !v_at_x.is_finite() {
            return Err(ActionError::NonFinite {
                what: "potential",
                t: s.t,
            });
        }
        let total = c2 / w - v_at_x;
        if total <= 0.0 {
            return Err(ActionError::NegativeEnergy {
                t: s.t,
                v_at_x,
                total,
            });
        }
        times.push(s.t);
        temporal.push(total);
        spatial.push((s.v / w) * s.v);
        lagrangian.push(0.5 * s.v * s.v - v_at_x);
        // c²(1/w − 1) written to stay accurate as v → 0.
        relativistic.push(s.v * s.v / (w * (1.0 + w)) - v_at_x);
    }
    let h = conv.hbar_m;
    let s_sign = conv.spatial_sign.as_f64();
    let phi_temporal = -trapezoid(&times, &temporal) / h;
    let phi_spatial = s_sign * trapezoid(&times, &spatial) / h;
    Ok(PhaseBreakdown {
        phi_temporal,
        phi_spatial,
        phi_total: phi_temporal + phi_spatial,
        action: trapezoid(&times, &lagrangian),
        action_relativistic: trapezoid(&times, &relativistic),
    })
}

/// Phase breakdowns for the two opposite spatial-sign companions sharing
/// one world line: temporal parts identical, spatial parts opposite.
pub fn pseudo_particle_pair(
    line: &WorldLine,
    pot: &Potential1D,
    conv: &Conventions,
) -> Result<(PhaseBreakdown, PhaseBreakdown), ActionError> {
    let plus = phase_along(line, pot, conv)?;
    let mut flipped = *conv;
    flipped.spatial_sign = flipped.spatial_sign.flip();
    let minus = phase_along(line, pot, &flipped)?;
    Ok((plus, minus))
}

// ---------------------------------------------------------------------------
// Least action on uniform grids
// ---------------------------------------------------------------------------

/// Midpoint-rule discrete action of a position array on a uniform grid.
pub fn midpoint_action(xs: &[f64], dt: f64, pot: &Potential1D) -> f64 {
    xs.windows(2)
        .map(|w| {
            let v = (w[1] - w[0]) / dt;
            dt * (0.5 * v * v - 0.5 * (pot.value(w[0]) + pot.value(w[1])))
        })
        .sum()
}

fn el_residual(xs: &[f64], dt: f64, pot: &Potential1D, out: &mut [f64]) {
    for (r, w) in out.iter_mut().zip(xs.windows(3)) {
        *r = (w[2] - 2.0 * w[1] + w[0]) / (dt * dt) + pot.slope(w[1]);
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Solve the tridiagonal system in place; `diag` and `rhs` are consumed.
/// Returns None on a vanishing pivot.
fn thomas_solve(sub: f64, diag: &mut [f64], sup: f64, rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut upper = vec![0.0; n];
    for i in 0..n {
        if i > 0 {
            let m = sub / diag[i - 1];
            diag[i] -= m * upper[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        if diag[i] == 0.0 || !diag[i].is_finite() {
            return None;
        }
        upper[i] = sup;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }
    Some(x)
}

/// Fixed-endpoint stationary path of the midpoint action by damped Newton
/// iteration on the discrete Euler–Lagrange residual.
///
/// Linear problems (free and uniform-field potentials) converge in one
/// step; the returned nodes then satisfy the discrete equation to solver
/// tolerance, which for a uniform field reproduces the continuum parabola
/// exactly at the nodes (the second difference of a quadratic is exact).
pub fn stationary_path(
    pot: &Potential1D,
    start: (f64, f64),
    end: (f64, f64),
    n_intervals: usize,
    tol: f64,
    max_iterations: usize,
) -> Result<Vec<f64>, ActionError> {
    let (t0, x0) = start;
    let (t1, x1) = end;
    if n_intervals < 2 {
        return Err(ActionError::TooFewSamples {
            need: 3,
            got: n_intervals + 1,
        });
    }
    if !(t1 > t0) {
        return Err(ActionError::NonMonotonicTime { index: 1 });
    }
    let n = n_intervals + 1;
    let dt = (t1 - t0) / n_intervals as f64;
    let mut xs: Vec<f64> = (0..n)
        .map(|i| x0 + (x1 - x0) * i as f64 / n_intervals as f64)
        .collect();

    let interior = n - 2;
    let mut residual = vec![0.0; interior];
    el_residual(&xs, dt, pot, &mut residual);
    let mut res_norm = max_abs(&residual);

    for iteration in 0..max_iterations {
        if !res_norm.is_finite() {
            return Err(ActionError::RelaxationFailure {
                iterations: iteration,
                residual: res_norm,
            });
        }
        if res_norm <= tol {
            return Ok(xs);
        }
        let inv_dt2 = 1.0 / (dt * dt);
        let mut diag: Vec<f64> = (1..=interior)
            .map(|k| -2.0 * inv_dt2 + pot.curvature(xs[k]))
            .collect();
        let mut rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
        let step = thomas_solve(inv_dt2, &mut diag, inv_dt2, &mut rhs).ok_or(
            ActionError::RelaxationFailure {
                iterations: iteration,
                residual: res_norm,
            },
        )?;

        let mut lambda = 1.0;
        loop {
            let mut trial = xs.clone();
            for (k, s) in step.iter().enumerate() {
                trial[k + 1] += lambda * s;
            }
            el_residual(&trial, dt, pot, &mut residual);
            let trial_norm = max_abs(&residual);
            if trial_norm < res_norm || trial_norm <= tol {
                xs = trial;
                res_norm = trial_norm;
                break;
            }
            lambda *= 0.5;
            if lambda < 1.0 / 1024.0 {
                return Err(ActionError::RelaxationFailure {
                    iterations: iteration,
                    residual: res_norm,
                });
            }
        }
    }
    if res_norm <= tol {
        Ok(xs)
    } else {
        Err(ActionError::RelaxationFailure {
            iterations: max_iterations,
            residual: res_norm,
        })
    }
}

/// One perturbed path in a least-action ensemble.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationRow {
    pub id: usize,
    /// Sup-norm of the displacement added to the reference path.
    pub amplitude_norm: f64,
    pub action: f64,
    pub excess_over_reference: f64,
}

#[derive(Debug, Clone)]
pub struct LeastActionReport {
    pub reference_action: f64,
    /// Reference node positions on the uniform grid.
    pub reference_path: Vec<f64>,
    pub t0: f64,
    pub dt: f64,
    pub rows: Vec<PerturbationRow>,
    pub min_excess: f64,
    pub max_excess: f64,
    pub mean_excess: f64,
    /// True when every nonzero perturbation increased the action.
    pub all_strictly_larger: bool,
}

/// Parameters for the perturbation ensemble.
#[derive(Debug, Clone, Copy)]
pub struct LeastActionSetup {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub n_intervals: usize,
    pub n_perturbations: usize,
    /// Scale of the random sine-mode amplitudes, before the guard rescale.
    pub amplitude: f64,
    pub seed: u64,
}

impl Default for LeastActionSetup {
    fn default() -> LeastActionSetup {
        LeastActionSetup {
            start: (0.0, 0.0),
            end: (1.0, 0.6),
            n_intervals: 200,
            n_perturbations: 100,
            amplitude: 0.02,
            seed: 0,
        }
    }
}

const SINE_MODES: usize = 5;

/// Compare the stationary path's action against seeded fixed-endpoint
/// sine-mode perturbations.
///
/// Each perturbation is Σₘ aₘ·sin(mπ(t−t0)/T) over the first five modes
/// with aₘ drawn uniformly from ±amplitude, rescaled when necessary so the
/// perturbed midpoint velocities respect the timelike guard.
pub fn least_action_check(
    pot: &Potential1D,
    setup: &LeastActionSetup,
    conv: &Conventions,
) -> Result<LeastActionReport, ActionError> {
    let reference = stationary_path(pot, setup.start, setup.end, setup.n_intervals, 1e-10, 200)?;
    let n = reference.len();
    let duration = setup.end.0 - setup.start.0;
    let dt = duration / setup.n_intervals as f64;
    let reference_action = midpoint_action(&reference, dt, pot);
    if !reference_action.is_finite() {
        return Err(ActionError::NonFinite {
            what: "reference action",
            t: setup.start.0,
        });
    }

    let speed_cap = conv.max_speed();
    let mut rng = ChaCha8Rng::seed_from_u64(setup.seed);
    let mut rows = Vec::with_capacity(setup.n_perturbations);
    let mut all_strict = true;

    for id in 0..setup.n_perturbations {
        let coeffs: Vec<f64> = (0..SINE_MODES)
            .map(|_| rng.gen_range(-1.0..1.0) * setup.amplitude)
            .collect();
        let mut delta: Vec<f64> = (0..n)
            .map(|i| {
                let frac = i as f64 / setup.n_intervals as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, a)| a * ((m + 1) as f64 * std::f64::consts::PI * frac).sin())
                    .sum()
            })
            .collect();

        // Rescale toward zero until the perturbed midpoint velocities stay
        // inside the timelike guard (the loop terminates because the
        // reference path itself satisfies the guard with margin).
        for _ in 0..64 {
            let worst = reference
                .windows(2)
                .zip(delta.windows(2))
                .map(|(xw, dw)| ((xw[1] + dw[1] - xw[0] - dw[0]) / dt).abs())
                .fold(0.0, f64::max);
            if worst < speed_cap {
                break;
            }
            for d in delta.iter_mut() {
                *d *= 0.5;
            }
        }

        let perturbed: Vec<f64> = reference.iter().zip(&delta).map(|(x, d)| x + d).collect();
        let action = midpoint_action(&perturbed, dt, pot);
        let excess = action - reference_action;
        let amplitude_norm = max_abs(&delta);
        if amplitude_norm > 0.0 && excess <= 0.0 {
            all_strict = false;
        }
        rows.push(PerturbationRow {
            id,
            amplitude_norm,
            action,
            excess_over_reference: excess,
        });
    }

    let min_excess = rows
        .iter()
        .map(|r| r.excess_over_reference)
        .fold(f64::INFINITY, f64::min);
    let max_excess = rows
        .iter()
        .map(|r| r.excess_over_reference)
        .fold(f64::NEG_INFINITY, f64::max);
    let mean_excess = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.excess_over_reference).sum::<f64>() / rows.len() as f64
    };
    Ok(LeastActionReport {
        reference_action,
        reference_path: reference,
        t0: setup.start.0,
        dt,
        rows,
        min_excess,
        max_excess,
        mean_excess,
        all_strictly_larger: all_strict,
    })
}
