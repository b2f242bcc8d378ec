//! World-line integration in a stationary 1+1D metric.
//!
//! Working in real coordinate time, the trajectory obeys the first-order
//! system
//!
//! ```text
//! dx/dτ  = ux
//! dux/dτ = −(1/(2 g_xx)) [ g_xx′ ux² + c² g_tt′ ut² ]
//! dt/dτ  = κ₀ / g_tt            with ut ≡ κ₀ / g_tt
//! ```
//!
//! where κ₀ = g_tt(x₀)·ut(x₀) is fixed at launch. Substituting ut = κ₀/g_tt
//! enforces the conservation law analytically, so the meaningful accuracy
//! monitors are the interval residual
//!
//! ```text
//! g_xx ux² − c² g_tt ut² + c²   (zero on the exact trajectory)
//! ```
//!
//! and the closed-form speed cross-check
//! ux² = (1/g_xx)(−c² + c² κ₀²/g_tt), which the integrated ux must
//! reproduce pointwise.

use crate::conventions::Conventions;
use crate::kinematics::{guard_velocity, KinematicsError};
use crate::metric::{Metric1D, MetricError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("no timelike launch at x0 = {x0} with v0 = {v0}: c²g_tt − g_xx v0² = {radicand}")]
    NotTimelike { x0: f64, v0: f64, radicand: f64 },
    #[error("step size must be positive, got {0}")]
    BadStep(f64),
}

/// Instantaneous state of a world line, parameterized by proper time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub tau: f64,
    pub x: f64,
    pub t: f64,
    /// dx/dτ
    pub ux: f64,
    /// dt/dτ
    pub ut: f64,
}

/// Fixed-step integrator bound to one metric and one launch.
pub struct Integrator<'a> {
    metric: &'a Metric1D,
    c: f64,
    kappa0: f64,
    state: GeodesicState,
}

impl<'a> Integrator<'a> {
    /// Solves the interval constraint at the launch point for dt/dτ given
    /// dx/dt = v0, with sign(ux) = sign(v0).
    pub fn launch(
        metric: &'a Metric1D,
        x0: f64,
        v0: f64,
        conv: &Conventions,
    ) -> Result<Integrator<'a>, GeodesicError> {
        guard_velocity(v0, conv)?;
        let g_tt = metric.g_tt(x0)?;
        let g_xx = metric.g_xx(x0)?;
        let c2 = conv.c * conv.c;
        let radicand = c2 * g_tt - g_xx * v0 * v0;
        if radicand <= 0.0 {
            return Err(GeodesicError::NotTimelike { x0, v0, radicand });
        }
        let ut = conv.c / radicand.sqrt();
        let state = GeodesicState {
            tau: 0.0,
            x: x0,
            t: 0.0,
            ux: v0 * ut,
            ut,
        };
        Ok(Integrator {
            metric,
            c: conv.c,
            kappa0: g_tt * ut,
            state,
        })
    }

    pub fn state(&self) -> GeodesicState {
        self.state
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    /// τ-derivatives of (x, ux, t) at a trial point.
    fn derivatives(&self, x: f64, ux: f64) -> Result<[f64; 3], GeodesicError> {
        let g_tt = self.metric.g_tt(x)?;
        let g_xx = self.metric.g_xx(x)?;
        let dg_tt = self.metric.dg_tt_dx(x)?;
        let dg_xx = self.metric.dg_xx_dx(x)?;
        let ut = self.kappa0 / g_tt;
        let c2 = self.c * self.c;
        let acc = -(dg_xx * ux * ux + c2 * dg_tt * ut * ut) / (2.0 * g_xx);
        Ok([ux, acc, ut])
    }

    /// One classical 4-stage step of size dtau.
    pub fn step(&mut self, dtau: f64) -> Result<GeodesicState, GeodesicError> {
        if !(dtau > 0.0) {
            return Err(GeodesicError::BadStep(dtau));
        }
        let s = self.state;
        let k1 = self.derivatives(s.x, s.ux)?;
        let k2 = self.derivatives(s.x + 0.5 * dtau * k1[0], s.ux + 0.5 * dtau * k1[1])?;
        let k3 = self.derivatives(s.x + 0.5 * dtau * k2[0], s.ux + 0.5 * dtau * k2[1])?;
        let k4 = self.derivatives(s.x + dtau * k3[0], s.ux + dtau * k3[1])?;
        let x = s.x + dtau / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        let ux = s.ux + dtau / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        let t = s.t + dtau / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        let ut = self.kappa0 / self.metric.g_tt(x)?;
        self.state = GeodesicState {
            tau: s.tau + dtau,
            x,
            t,
            ux,
            ut,
        };
        Ok(self.state)
    }

    /// g_xx ux² − c² g_tt ut² + c²; zero on the exact trajectory.
    pub fn interval_residual(&self) -> Result<f64, GeodesicError> {
        let s = self.state;
        let g_tt = self.metric.g_tt(s.x)?;
        let g_xx = self.metric.g_xx(s.x)?;
        let c2 = self.c * self.c;
        Ok(g_xx * s.ux * s.ux - c2 * g_tt * s.ut * s.ut + c2)
    }

    /// ux² − (1/g_xx)(−c² + c²κ₀²/g_tt): the closed-form speed the
    /// integrated ux must agree with pointwise.
    pub fn speed_closed_form_residual(&self) -> Result<f64, GeodesicError> {
        let s = self.state;
        let g_tt = self.metric.g_tt(s.x)?;
        let g_xx = self.metric.g_xx(s.x)?;
        let c2 = self.c * self.c;
        let closed = (-c2 + c2 * self.kappa0 * self.kappa0 / g_tt) / g_xx;
        Ok(s.ux * s.ux - closed)
    }
}

/// One recorded sample of an integrated world line.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub tau: f64,
    pub x: f64,
    pub t: f64,
    pub ux: f64,
    pub ut: f64,
    pub interval_residual: f64,
}

/// Sampled world line plus accuracy monitors.
#[derive(Debug, Clone)]
pub struct GeodesicTrace {
    pub points: Vec<TracePoint>,
    pub kappa0: f64,
    /// max |g_xx ux² − c² g_tt ut² + c²| over all samples
    pub max_interval_residual: f64,
    /// max |ux² − closed form| over all samples
    pub max_speed_residual: f64,
    /// max relative deviation of g_tt·ut from κ₀ (held analytically;
    /// recorded to witness that the enforcement survives rounding)
    pub max_conserved_drift: f64,
}

impl GeodesicTrace {
    pub fn endpoint(&self) -> TracePoint {
        *self.points.last().expect("trace holds at least the launch")
    }
}

/// Integrates from launch to `tau_end` in fixed steps of `dtau`,
/// recording every sample with its interval residual.
pub fn integrate(
    metric: &Metric1D,
    x0: f64,
    v0: f64,
    tau_end: f64,
    dtau: f64,
    conv: &Conventions,
) -> Result<GeodesicTrace, GeodesicError> {
    if !(dtau > 0.0) || !(tau_end > 0.0) {
        return Err(GeodesicError::BadStep(dtau.min(tau_end)));
    }
    let mut integ = Integrator::launch(metric, x0, v0, conv)?;
    let n_steps = (tau_end / dtau).round() as usize;
    let mut points = Vec::with_capacity(n_steps + 1);
    let mut max_interval = 0.0f64;
    let mut max_speed = 0.0f64;
    let mut max_drift = 0.0f64;
    for i in 0..=n_steps {
        if i > 0 {
            integ.step(dtau)?;
            integ.state.tau = i as f64 * dtau; // avoid accumulated sum drift
        }
        let s = integ.state();
        let interval = integ.interval_residual()?;
        let speed = integ.speed_closed_form_residual()?;
        let drift = (metric.g_tt(s.x)? * s.ut / integ.kappa0 - 1.0).abs();
        max_interval = max_interval.max(interval.abs());
        max_speed = max_speed.max(speed.abs());
        max_drift = max_drift.max(drift);
        points.push(TracePoint {
            tau: s.tau,
            x: s.x,
            t: s.t,
            ux: s.ux,
            ut: s.ut,
            interval_residual: interval,
        });
    }
    Ok(GeodesicTrace {
        points,
        kappa0: integ.kappa0(),
        max_interval_residual: max_interval,
        max_speed_residual: max_speed,
        max_conserved_drift: max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conv() -> Conventions {
        Conventions::default()
    }

    #[test]
    fn flat_launch_matches_lorentz_kinematics() {
        let m = Metric1D::flat();
        let integ = Integrator::launch(&m, 0.0, 0.6, &conv()).unwrap();
        let s = integ.state();
        assert!((s.ut - 1.25).abs() < 1e-15);
        assert!((s.ux - 0.75).abs() < 1e-15);
        assert!((integ.kappa0() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn flat_rest_particle_proper_time_is_coordinate_time() {
        let m = Metric1D::flat();
        let mut integ = Integrator::launch(&m, 1.0, 0.0, &conv()).unwrap();
        assert_eq!(integ.state().ut, 1.0);
        assert_eq!(integ.kappa0(), 1.0);
        integ.step(0.37).unwrap();
        let s = integ.state();
        assert_eq!(s.x, 1.0);
        assert!((s.t - 0.37).abs() < 1e-15);
    }

    #[test]
    fn flat_unit_proper_time_straight_line() {
        let m = Metric1D::flat();
        let mut integ = Integrator::launch(&m, 0.0, 0.6, &conv()).unwrap();
        for _ in 0..10 {
            integ.step(0.1).unwrap();
        }
        let s = integ.state();
        assert!((s.x - 0.75).abs() < 1e-12);
        assert!((s.t - 1.25).abs() < 1e-12);
    }

    #[test]
    fn flat_trace_endpoint_and_speed_check() {
        let m = Metric1D::flat();
        let trace = integrate(&m, 0.0, 0.6, 2.0, 1e-3, &conv()).unwrap();
        let end = trace.endpoint();
        assert!((end.x - 1.5).abs() < 1e-10);
        assert!((end.t - 2.5).abs() < 1e-10);
        assert!((end.x / end.t - 0.6).abs() < 1e-10);
        // closed-form speed: ux² = κ₀² − 1 = 0.5625
        let ux2 = end.ux * end.ux;
        assert!((ux2 - 0.5625).abs() < 1e-12);
        assert!(trace.max_interval_residual < 1e-12);
        assert!(trace.max_speed_residual < 1e-12);
    }

    #[test]
    fn superluminal_launch_rejected() {
        let m = Metric1D::flat();
        assert!(matches!(
            Integrator::launch(&m, 0.0, 1.0, &conv()),
            Err(GeodesicError::Kinematics(_))
        ));
        // Timelike test can also fail inside the guard when g_tt is small
        let weak = Metric1D::from_expressions("0.25", "1").unwrap();
        assert!(matches!(
            Integrator::launch(&weak, 0.0, 0.9, &conv()),
            Err(GeodesicError::NotTimelike { .. })
        ));
    }

    #[test]
    fn linear_profile_conserves_interval() {
        let m = Metric1D::from_expressions("1 + 0.2*x", "1").unwrap();
        let trace = integrate(&m, 0.0, 0.0, 5.0, 5e-4, &conv()).unwrap();
        assert!((trace.kappa0 - 1.0).abs() < 1e-15);
        assert!(
            trace.max_interval_residual < 1e-10,
            "interval residual {}",
            trace.max_interval_residual
        );
        assert!(
            trace.max_speed_residual < 1e-10,
            "speed residual {}",
            trace.max_speed_residual
        );
        assert!(trace.max_conserved_drift < 1e-14);
        // Launched at rest where g_tt grows to the right: falls left
        assert!(trace.endpoint().x < -1.0);
    }

    #[test]
    fn linear_profile_domain_exit_time_matches_quadrature() {
        // For g_tt = 1 + 0.2x, launch at rest from x = 0: the domain edge
        // g_tt → 0 sits at x = −5 and the proper time to reach it is
        // ∫₀⁵ √((1 − 0.2u)/(0.2u)) du = 5π/2.
        let m = Metric1D::from_expressions("1 + 0.2*x", "1").unwrap();
        let mut integ = Integrator::launch(&m, 0.0, 0.0, &conv()).unwrap();
        let dtau = 1e-4;
        let mut tau = 0.0;
        let exit = loop {
            match integ.step(dtau) {
                Ok(s) => {
                    tau = s.tau;
                    assert!(tau < 9.0, "no domain exit before tau = 9");
                }
                Err(GeodesicError::Metric(_)) => break tau,
                Err(other) => panic!("unexpected error {other:?}"),
            }
        };
        let expected = 5.0 * std::f64::consts::PI / 2.0;
        assert!(
            (exit - expected).abs() < 0.02,
            "exit at tau = {exit}, expected {expected}"
        );
    }

    #[test]
    fn sampled_linear_profile_reproduces_closed_form_run() {
        let closed = Metric1D::from_expressions("1 + 0.2*x", "1").unwrap();
        let dx = 0.01;
        let n = 801; // x ∈ [−4, 4]
        let gtt: Vec<f64> = (0..n).map(|i| 1.0 + 0.2 * (-4.0 + dx * i as f64)).collect();
        let gxx = vec![1.0; n];
        let sampled = Metric1D::from_samples(-4.0, dx, gtt, gxx).unwrap();
        let a = integrate(&closed, 0.0, 0.0, 4.0, 1e-3, &conv()).unwrap();
        let b = integrate(&sampled, 0.0, 0.0, 4.0, 1e-3, &conv()).unwrap();
        let ea = a.endpoint();
        let eb = b.endpoint();
        // Piecewise-linear interpolation of a linear profile is exact
        assert!((ea.x - eb.x).abs() < 1e-9, "{} vs {}", ea.x, eb.x);
        assert!((ea.t - eb.t).abs() < 1e-9);
    }
}
