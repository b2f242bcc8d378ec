//! On-shell two-component structure and the first-order pair elimination.
//!
//! The coupled 2×2 system links a scalar wave to an auxiliary field
//! K = (jħ̃/c)·∂ₓΨ₁. On the energy shell the coefficient matrix is
//! singular; its null vector fixes the component ratio for each energy
//! branch. Eliminating K produces a single second-order operator whose
//! coefficient triple is compared against the reference dispersive
//! operator (jħ̃·∂t, ħ̃²·∂ₓₓ, rest term); the two differ by a factor j on
//! the rest term only, which the measured-discrepancy machinery records.

use crate::algebra::Matrix2;
use crate::conventions::{Conventions, Sign};
use crate::kinematics::Kinematics;
use crate::planewave::PlaneWave;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpinorError {
    /// Relative determinant too large for a meaningful null space.
    #[error("matrix is not singular at tolerance {tol:e}: |det|/scale = {det_rel:e}")]
    NonSingular { det_rel: f64, tol: f64 },
    #[error("zero matrix has no preferred null direction")]
    ZeroMatrix,
    #[error("grid too coarse: max phase step {max_phase_step:.3} rad exceeds 0.25")]
    GridTooCoarse { max_phase_step: f64 },
    #[error("need at least {need} samples per slice, got {got}")]
    SlicesTooShort { need: usize, got: usize },
    #[error("time slices differ in length: {a} vs {b}")]
    SliceLengthMismatch { a: usize, b: usize },
    #[error("grid spacing must be positive and finite, got {value}")]
    BadSpacing { value: f64 },
}

fn j() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Coefficient matrix of the coupled pair at fixed (E, p):
/// [[β·p, j(E/c − c)], [j(E/c + c), −β·p]] with E carrying the branch sign.
pub fn dirac_matrix(
    kin: &Kinematics,
    beta_s: Sign,
    branch: Sign,
    conv: &Conventions,
) -> Matrix2<Complex64> {
    let c = conv.c;
    let e = branch.as_f64() * kin.e;
    let beta = beta_s.as_f64();
    let re = |x: f64| Complex64::new(x, 0.0);
    Matrix2::new(
        re(beta * kin.p),
        j() * (e / c - c),
        j() * (e / c + c),
        re(-beta * kin.p),
    )
}

/// det of the pair matrix in closed form: (E/c)² − β²p² − c².
/// Vanishes exactly on the energy shell E² = c²p² + c⁴.
pub fn determinant_condition(e: f64, p: f64, beta_s: Sign, conv: &Conventions) -> f64 {
    let c = conv.c;
    let beta = beta_s.as_f64();
    (e / c) * (e / c) - beta * beta * p * p - c * c
}

fn frobenius_sq(m: &Matrix2<Complex64>) -> f64 {
    m.a.norm_sqr() + m.b.norm_sqr() + m.c.norm_sqr() + m.d.norm_sqr()
}

/// Unit null vector of a (numerically) singular 2×2 matrix.
///
/// Singularity is judged relative to the squared Frobenius norm, so the
/// tolerance is scale free. The null direction is read from the row with
/// the larger 1-norm (ties go to the first row): row (r₁, r₂) annihilates
/// (r₂, −r₁). Normalization divides by the positive real Euclidean norm,
/// leaving the relative phase of the components untouched.
pub fn null_space(
    m: &Matrix2<Complex64>,
    tol: f64,
) -> Result<(Complex64, Complex64), SpinorError> {
    let scale = frobenius_sq(m);
    if scale == 0.0 {
        return Err(SpinorError::ZeroMatrix);
    }
    let det_rel = m.det().norm() / scale;
    if det_rel > tol {
        return Err(SpinorError::NonSingular { det_rel, tol });
    }
    let row1 = m.a.norm() + m.b.norm();
    let row2 = m.c.norm() + m.d.norm();
    let (u1, u2) = if row1 >= row2 { (m.b, -m.a) } else { (m.d, -m.c) };
    let norm = (u1.norm_sqr() + u2.norm_sqr()).sqrt();
    Ok((u1 / norm, u2 / norm))
}

/// Normalized two-component amplitude on one energy branch.
#[derive(Debug, Clone, Copy)]
pub struct Spinor2 {
    pub u1: Complex64,
    pub u2: Complex64,
    pub beta_s: Sign,
    pub branch: Sign,
}

impl Spinor2 {
    /// u₂/u₁. Divergent only at p = 0 on the branch that zeroes u₁.
    pub fn ratio(&self) -> Complex64 {
        self.u2 / self.u1
    }

    /// 2·Re(u₁·conj(u₂)), the interference term in |u₁ + u₂|².
    /// Zero whenever the components are 90° out of phase.
    pub fn cross_term(&self) -> f64 {
        2.0 * (self.u1 * self.u2.conj()).re
    }
}

/// Null spinor of the on-shell pair matrix at velocity-derived (E, p).
pub fn on_shell_spinor(
    kin: &Kinematics,
    beta_s: Sign,
    branch: Sign,
    conv: &Conventions,
    tol: f64,
) -> Result<Spinor2, SpinorError> {
    let m = dirac_matrix(kin, beta_s, branch, conv);
    let (u1, u2) = null_space(&m, tol)?;
    Ok(Spinor2 {
        u1,
        u2,
        beta_s,
        branch,
    })
}

/// |u₂/u₁| predicted in closed form: v/(c(1+w)) on the negative branch.
/// The positive branch gives the reciprocal.
pub fn ratio_magnitude_closed_form(kin: &Kinematics, branch: Sign, conv: &Conventions) -> f64 {
    let base = kin.v / (conv.c * (1.0 + kin.w));
    match branch {
        Sign::Minus => base,
        Sign::Plus => 1.0 / base,
    }
}

// ---------------------------------------------------------------------------
// Elimination of the auxiliary field
// ---------------------------------------------------------------------------

/// K/Ψ on a plane wave, with K = (jħ̃/c)·∂ₓΨ. Evaluates to −s·p/c.
pub fn aux_multiplier(wave: &PlaneWave) -> Complex64 {
    let conv = &wave.conv;
    Complex64::new(-conv.spatial_sign.as_f64() * wave.p / conv.c, 0.0)
}

/// Residual of the second member of the coupled pair on a plane wave,
/// per unit Ψ: (ħ̃/(jc))·∂ₜΨ − (ħ̃/j)·∂ₓK + jc·Ψ evaluates to
/// (p² − εE)/c + jc. The imaginary part jc never cancels, so an on-shell
/// plane wave leaves a residual of magnitude c·√2.
pub fn pair_residual_multiplier(wave: &PlaneWave) -> Complex64 {
    let conv = &wave.conv;
    let eps = conv.energy_sign.as_f64();
    Complex64::new((wave.p * wave.p - eps * wave.e) / conv.c, conv.c)
}

/// Coefficients (on ∂ₜΨ, ∂ₓₓΨ, Ψ) of the operator left after substituting
/// K = (jħ̃/c)·∂ₓΨ into the second member and scaling by −c:
/// (jħ̃, ħ̃², −jc²).
pub fn eliminated_coefficients(conv: &Conventions) -> [Complex64; 3] {
    let h = conv.hbar_m;
    [
        j() * h,
        Complex64::new(h * h, 0.0),
        -j() * conv.c * conv.c,
    ]
}

/// Reference dispersive operator with a real rest coefficient:
/// (jħ̃, ħ̃², −c²). Differs from the eliminated triple by j on the rest
/// term only.
pub fn reference_coefficients(conv: &Conventions) -> [Complex64; 3] {
    let h = conv.hbar_m;
    [
        j() * h,
        Complex64::new(h * h, 0.0),
        Complex64::new(-conv.c * conv.c, 0.0),
    ]
}

/// Apply a coefficient triple (on ∂ₜ, ∂ₓₓ, 1) to a plane wave, per unit Ψ.
pub fn apply_coefficients(coeffs: &[Complex64; 3], wave: &PlaneWave) -> Complex64 {
    let conv = &wave.conv;
    let h = conv.hbar_m;
    let dt_mult = -j() * conv.energy_sign.as_f64() * wave.e / h;
    let dxx_mult = Complex64::new(-wave.p * wave.p / (h * h), 0.0);
    coeffs[0] * dt_mult + coeffs[1] * dxx_mult + coeffs[2]
}

/// Finite-difference residuals of the pair system and both second-order
/// operators on three time slices of a sampled field.
///
/// All arrays share the index range 2..len−2 of the input slices (the
/// auxiliary field needs one ghost node, its derivative another).
#[derive(Debug, Clone)]
pub struct EliminationResiduals {
    /// K at the retained nodes.
    pub aux: Vec<Complex64>,
    /// Residual of the second pair member.
    pub pair: Vec<Complex64>,
    /// Residual of the eliminated operator (jħ̃, ħ̃², −jc²).
    pub eliminated: Vec<Complex64>,
    /// Residual of the reference operator (jħ̃, ħ̃², −c²).
    pub reference: Vec<Complex64>,
    /// First retained sample index in the input slices.
    pub offset: usize,
}

fn max_phase_step(samples: &[Complex64]) -> f64 {
    samples
        .windows(2)
        .filter(|w| w[0].norm() > 0.0 && w[1].norm() > 0.0)
        .map(|w| (w[1] / w[0]).arg().abs())
        .fold(0.0, f64::max)
}

/// Central-difference residuals from three equally spaced time slices.
///
/// Rejects grids where the field advances more than 0.25 rad of phase per
/// sample in space or time (roughly 25 samples per oscillation), since the
/// residual classification is meaningless below that resolution.
pub fn elimination_residuals_from_slices(
    prev: &[Complex64],
    curr: &[Complex64],
    next: &[Complex64],
    dx: f64,
    dt: f64,
    conv: &Conventions,
) -> Result<EliminationResiduals, SpinorError> {
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(SpinorError::BadSpacing { value: dx });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SpinorError::BadSpacing { value: dt });
    }
    let n = curr.len();
    if n < 5 {
        return Err(SpinorError::SlicesTooShort { need: 5, got: n });
    }
    for other in [prev.len(), next.len()] {
        if other != n {
            return Err(SpinorError::SliceLengthMismatch { a: n, b: other });
        }
    }
    let space_step = max_phase_step(curr);
    let time_step = curr
        .iter()
        .zip(next)
        .filter(|(a, b)| a.norm() > 0.0 && b.norm() > 0.0)
        .map(|(a, b)| (b / a).arg().abs())
        .fold(0.0, f64::max);
    let worst = space_step.max(time_step);
    if worst > 0.25 {
        return Err(SpinorError::GridTooCoarse {
            max_phase_step: worst,
        });
    }

    let c = conv.c;
    let h = conv.hbar_m;
    let jj = j();
    // K on 1..n−1 from the middle slice.
    let aux_full: Vec<Complex64> = (1..n - 1)
        .map(|i| jj * h / c * (curr[i + 1] - curr[i - 1]) / (2.0 * dx))
        .collect();

    let mut aux = Vec::with_capacity(n - 4);
    let mut pair = Vec::with_capacity(n - 4);
    let mut eliminated = Vec::with_capacity(n - 4);
    let mut reference = Vec::with_capacity(n - 4);
    for i in 2..n - 2 {
        let psi_t = (next[i] - prev[i]) / (2.0 * dt);
        let psi_xx = (curr[i + 1] - 2.0 * curr[i] + curr[i - 1]) / (dx * dx);
        let k_x = (aux_full[i] - aux_full[i - 2]) / (2.0 * dx);
        aux.push(aux_full[i - 1]);
        pair.push(h / (jj * c) * psi_t - h / jj * k_x + jj * c * curr[i]);
        eliminated.push(jj * h * psi_t + h * h * psi_xx - jj * c * c * curr[i]);
        reference.push(jj * h * psi_t + h * h * psi_xx - c * c * curr[i]);
    }
    Ok(EliminationResiduals {
        aux,
        pair,
        eliminated,
        reference,
        offset: 2,
    })
}

/// Sample a plane wave onto three time slices and run the grid residuals.
pub fn elimination_residuals_on_wave(
    wave: &PlaneWave,
    x0: f64,
    dx: f64,
    n: usize,
    t: f64,
    dt: f64,
) -> Result<EliminationResiduals, SpinorError> {
    let slice = |tt: f64| -> Vec<Complex64> {
        (0..n).map(|i| wave.evaluate(x0 + i as f64 * dx, tt)).collect()
    };
    elimination_residuals_from_slices(&slice(t - dt), &slice(t), &slice(t + dt), dx, dt, &wave.conv)
}
