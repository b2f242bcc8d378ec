//! Stationary 1+1D metric profiles g_tt(x), g_xx(x).
//!
//! Profiles come in two representations: closed-form expressions (with
//! analytic derivatives) and sampled tables (linear interpolation, central
//! difference derivatives at the grid spacing). Both components must stay
//! strictly positive wherever they are evaluated; a non-positive value is
//! treated as leaving the profile's domain.

use crate::expr::{Expr, ExprError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("x = {x} outside the profile domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },
    #[error("{component} = {value} is not positive at x = {x}")]
    NonPositive {
        component: &'static str,
        x: f64,
        value: f64,
    },
    #[error("profile expression: {0}")]
    Expression(#[from] ExprError),
    #[error("sampled profile needs at least 2 points, got {0}")]
    TooFewSamples(usize),
    #[error("sampled profile component lengths differ: g_tt has {gtt}, g_xx has {gxx}")]
    LengthMismatch { gtt: usize, gxx: usize },
    #[error("grid spacing must be positive, got {0}")]
    BadSpacing(f64),
}

#[derive(Debug, Clone)]
struct ClosedForm {
    g_tt: Expr,
    g_xx: Expr,
    dg_tt: Expr,
    dg_xx: Expr,
}

#[derive(Debug, Clone)]
struct Sampled {
    x0: f64,
    dx: f64,
    g_tt: Vec<f64>,
    g_xx: Vec<f64>,
    // Central differences at the nodes (one-sided at the ends).
    dg_tt: Vec<f64>,
    dg_xx: Vec<f64>,
}

impl Sampled {
    fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.g_tt.len() - 1) as f64
    }

    fn interpolate(&self, table: &[f64], x: f64) -> Result<f64, MetricError> {
        let lo = self.x0;
        let hi = self.x_max();
        if !(lo..=hi).contains(&x) {
            return Err(MetricError::OutsideDomain { x, lo, hi });
        }
        let s = (x - self.x0) / self.dx;
        let i = (s.floor() as usize).min(table.len() - 2);
        let frac = s - i as f64;
        Ok(table[i] * (1.0 - frac) + table[i + 1] * frac)
    }
}

fn node_derivatives(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dx);
    }
    d[0] = (values[1] - values[0]) / dx;
    d[n - 1] = (values[n - 1] - values[n - 2]) / dx;
    d
}

#[derive(Debug, Clone)]
enum Repr {
    ClosedForm(ClosedForm),
    Sampled(Sampled),
}

/// A stationary metric profile.
#[derive(Debug, Clone)]
pub struct Metric1D {
    repr: Repr,
}

impl Metric1D {
    /// Flat space: g_tt = g_xx = 1.
    pub fn flat() -> Metric1D {
        Metric1D::from_expressions("1", "1").expect("constant profile parses")
    }

    /// Closed-form profile from expression text in `x`.
    pub fn from_expressions(g_tt: &str, g_xx: &str) -> Result<Metric1D, MetricError> {
        let g_tt = Expr::parse(g_tt)?;
        let g_xx = Expr::parse(g_xx)?;
        let dg_tt = g_tt.derivative()?;
        let dg_xx = g_xx.derivative()?;
        Ok(Metric1D {
            repr: Repr::ClosedForm(ClosedForm {
                g_tt,
                g_xx,
                dg_tt,
                dg_xx,
            }),
        })
    }

    /// Sampled profile on a uniform grid starting at `x0` with spacing `dx`.
    pub fn from_samples(
        x0: f64,
        dx: f64,
        g_tt: Vec<f64>,
        g_xx: Vec<f64>,
    ) -> Result<Metric1D, MetricError> {
        if g_tt.len() != g_xx.len() {
            return Err(MetricError::LengthMismatch {
                gtt: g_tt.len(),
                gxx: g_xx.len(),
            });
        }
        if g_tt.len() < 2 {
            return Err(MetricError::TooFewSamples(g_tt.len()));
        }
        if !(dx > 0.0) {
            return Err(MetricError::BadSpacing(dx));
        }
        let dg_tt = node_derivatives(&g_tt, dx);
        let dg_xx = node_derivatives(&g_xx, dx);
        Ok(Metric1D {
            repr: Repr::Sampled(Sampled {
                x0,
                dx,
                g_tt,
                g_xx,
                dg_tt,
                dg_xx,
            }),
        })
    }

    pub fn g_tt(&self, x: f64) -> Result<f64, MetricError> {
        let value = match &self.repr {
            Repr::ClosedForm(cf) => cf.g_tt.eval(x),
            Repr::Sampled(s) => s.interpolate(&s.g_tt, x)?,
        };
        ensure_positive("g_tt", x, value)
    }

    pub fn g_xx(&self, x: f64) -> Result<f64, MetricError> {
        let value = match &self.repr {
            Repr::ClosedForm(cf) => cf.g_xx.eval(x),
            Repr::Sampled(s) => s.interpolate(&s.g_xx, x)?,
        };
        ensure_positive("g_xx", x, value)
    }

    pub fn dg_tt_dx(&self, x: f64) -> Result<f64, MetricError> {
        match &self.repr {
            Repr::ClosedForm(cf) => Ok(cf.dg_tt.eval(x)),
            Repr::Sampled(s) => s.interpolate(&s.dg_tt, x),
        }
    }

    pub fn dg_xx_dx(&self, x: f64) -> Result<f64, MetricError> {
        match &self.repr {
            Repr::ClosedForm(cf) => Ok(cf.dg_xx.eval(x)),
            Repr::Sampled(s) => s.interpolate(&s.dg_xx, x),
        }
    }
}

fn ensure_positive(component: &'static str, x: f64, value: f64) -> Result<f64, MetricError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(MetricError::NonPositive {
            component,
            x,
            value,
        })
    }
}
