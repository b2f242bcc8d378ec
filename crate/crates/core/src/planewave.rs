//! Harmonic pseudo-particle wave functions and the dispersive wave-operator
//! residual.
//!
//! The operator under test is
//!
//! ```text
//! L[Ψ] = j ħ̃ ∂Ψ/∂t + k ħ̃² ∂²Ψ/∂x² − m c² Ψ
//! ```
//!
//! with k = 1, m = 1 in the primary form; `OperatorForm` exposes the
//! textbook variants (halved kinetic coefficient, dropped rest term).
//! On a plane wave `amp·exp[j(s·p·x − ε·E·t)/ħ̃]` the operator acts as
//! multiplication by the real constant `R = ε·E − k·p² − m·c²`, which a
//! central-difference route must reproduce to second order in the step.

use crate::conventions::Conventions;
use crate::kinematics::{guard_velocity, Kinematics, KinematicsError};
use num_complex::Complex64;

/// Coefficient switches for the wave operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorForm {
    /// Keep the rest term −c²Ψ.
    pub include_rest: bool,
    /// Use ħ̃²/2 instead of ħ̃² on the spatial term.
    pub half_kinetic: bool,
}

impl OperatorForm {
    /// The primary form: full kinetic coefficient, rest term kept.
    pub const PRIMARY: OperatorForm = OperatorForm {
        include_rest: true,
        half_kinetic: false,
    };
    /// Textbook free-particle form: halved kinetic term, no rest term.
    pub const TEXTBOOK_FREE: OperatorForm = OperatorForm {
        include_rest: false,
        half_kinetic: true,
    };

    pub fn kinetic_factor(&self) -> f64 {
        if self.half_kinetic {
            0.5
        } else {
            1.0
        }
    }

    pub fn rest_factor(&self) -> f64 {
        if self.include_rest {
            1.0
        } else {
            0.0
        }
    }
}

/// A single harmonic wave function with energy E and momentum p per unit
/// rest mass. The sign conventions (ε, s) and units live in `conv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub e: f64,
    pub p: f64,
    pub amp: Complex64,
    pub conv: Conventions,
}

impl PlaneWave {
    pub fn new(e: f64, p: f64, amp: Complex64, conv: Conventions) -> PlaneWave {
        PlaneWave { e, p, amp, conv }
    }

    /// Wave from the kinematic pair E = c²/w, p = v/w.
    pub fn from_velocity(
        v: f64,
        amp: Complex64,
        conv: Conventions,
    ) -> Result<PlaneWave, KinematicsError> {
        let kin = Kinematics::from_velocity(v, &conv)?;
        Ok(PlaneWave {
            e: kin.e,
            p: kin.p,
            amp,
            conv,
        })
    }

    /// amp · exp[j(s·p·x − ε·E·t)/ħ̃]
    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        let s = self.conv.spatial_sign.as_f64();
        let eps = self.conv.energy_sign.as_f64();
        let phase = (s * self.p * x - eps * self.e * t) / self.conv.hbar_m;
        self.amp * Complex64::new(0.0, phase).exp()
    }

    /// The real eigenvalue R = ε·E − k·p² − m·c² of the wave operator on
    /// this wave. Independent of amp, x, t, and of the spatial sign s
    /// (the spatial term is even in p).
    pub fn operator_eigenvalue(&self, form: OperatorForm) -> f64 {
        let eps = self.conv.energy_sign.as_f64();
        let c2 = self.conv.c * self.conv.c;
        eps * self.e - form.kinetic_factor() * self.p * self.p - form.rest_factor() * c2
    }

    /// Central-difference estimate of the operator eigenvalue at (x, t):
    /// L[Ψ]/Ψ with second-order stencils of steps (hx, ht). Converges to
    /// `operator_eigenvalue` at order 2.
    pub fn operator_eigenvalue_fd(
        &self,
        form: OperatorForm,
        x: f64,
        t: f64,
        hx: f64,
        ht: f64,
    ) -> Complex64 {
        let hb = self.conv.hbar_m;
        let c2 = self.conv.c * self.conv.c;
        let j = Complex64::new(0.0, 1.0);
        let psi = self.evaluate(x, t);
        let dpsi_dt = (self.evaluate(x, t + ht) - self.evaluate(x, t - ht)) / (2.0 * ht);
        let d2psi_dx2 = (self.evaluate(x + hx, t) - 2.0 * psi + self.evaluate(x - hx, t))
            / (hx * hx);
        let l = j * hb * dpsi_dt + form.kinetic_factor() * hb * hb * d2psi_dx2
            - form.rest_factor() * c2 * psi;
        l / psi
    }
}

/// The mode energy annihilated by the operator under the active energy
/// sign: ε·(k·p² + m·c²).
pub fn nulling_energy(p: f64, form: OperatorForm, conv: &Conventions) -> f64 {
    let c2 = conv.c * conv.c;
    conv.energy_sign.as_f64() * (form.kinetic_factor() * p * p + form.rest_factor() * c2)
}

/// Closed form of the kinematic-pair residual for the primary operator:
/// ε c²/w − c²/w². Equals `operator_eigenvalue` on the wave built from
/// E = c²/w, p = v/w.
pub fn kinematic_pair_residual_closed_form(v: f64, conv: &Conventions) -> Result<f64, KinematicsError> {
    let kin = Kinematics::from_velocity(v, conv)?;
    let c2 = conv.c * conv.c;
    Ok(conv.energy_sign.as_f64() * c2 / kin.w - c2 / (kin.w * kin.w))
}

/// One row of a dispersion scan under a fixed set of conventions.
#[derive(Debug, Clone, Copy)]
pub struct DispersionRow {
    pub v: f64,
    pub w: f64,
    /// E = c²/w
    pub e_kinematic: f64,
    pub p: f64,
    /// operator eigenvalue on the kinematic pair (E = c²/w, p = v/w)
    pub residual_kinematic_pair: f64,
    /// ε c²/w − c²/w²
    pub residual_closed_form: f64,
    /// operator eigenvalue on the nulling pair (εE = p² + c²): zero
    pub residual_nulling_pair: f64,
}

/// Evaluates the primary operator on both canonical (E, p) pairs for each
/// sampled velocity, under the conventions' energy sign.
pub fn dispersion_scan(
    conv: &Conventions,
    v_samples: &[f64],
) -> Result<Vec<DispersionRow>, KinematicsError> {
    v_samples
        .iter()
        .map(|&v| {
            guard_velocity(v, conv)?;
            let kin = Kinematics::from_velocity(v, conv)?;
            let wave = PlaneWave::new(kin.e, kin.p, Complex64::new(1.0, 0.0), *conv);
            // Signed: under ε = −1 the negative-energy branch nulls.
            let nulling = PlaneWave::new(
                nulling_energy(kin.p, OperatorForm::PRIMARY, conv),
                kin.p,
                Complex64::new(1.0, 0.0),
                *conv,
            );
            Ok(DispersionRow {
                v,
                w: kin.w,
                e_kinematic: kin.e,
                p: kin.p,
                residual_kinematic_pair: wave.operator_eigenvalue(OperatorForm::PRIMARY),
                residual_closed_form: kinematic_pair_residual_closed_form(v, conv)?,
                residual_nulling_pair: nulling.operator_eigenvalue(OperatorForm::PRIMARY),
            })
        })
        .collect()
}

/// Least-squares slope of ln|f(v)| against ln v over the given samples.
/// Used to measure the small-v scaling order of residuals.
pub fn log_log_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(v, r)| v > 0.0 && r.abs() > 0.0)
        .map(|&(v, r)| (v.ln(), r.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Pointwise |Ψ|² with the total ∑|Ψ|²·dx.
#[derive(Debug, Clone)]
pub struct BornDensity {
    pub values: Vec<f64>,
    pub dx: f64,
    pub total: f64,
}

pub fn born_density(field: &[Complex64], dx: f64) -> BornDensity {
    let values: Vec<f64> = field.iter().map(|z| z.norm_sqr()).collect();
    let total = values.iter().sum::<f64>() * dx;
    BornDensity { values, dx, total }
}

/// Two-component density |Ψ₁|² + |Ψ₂|².
pub fn born_density_pair(psi1: &[Complex64], psi2: &[Complex64], dx: f64) -> BornDensity {
    assert_eq!(psi1.len(), psi2.len(), "component lengths must match");
    let values: Vec<f64> = psi1
        .iter()
        .zip(psi2)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let total = values.iter().sum::<f64>() * dx;
    BornDensity { values, dx, total }
}
