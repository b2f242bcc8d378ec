//! Grid evolution of the dispersive scalar equation and the coupled
//! two-component system, with wave-packet construction and Born-density
//! diagnostics.
//!
//! Scalar equation (periodic grid, central second difference in space):
//!
//! ```text
//! ∂Ψ/∂t = j·(A·∂ₓₓΨ − B·Ψ)      A = kinetic_factor·ħ̃,  B = rest_factor·c²/ħ̃
//! ```
//!
//! Time stepping is trapezoidal (Crank–Nicolson). The update matrix is the
//! Cayley transform of a Hermitian operator, so the discrete l² norm is
//! conserved exactly; the cyclic tridiagonal system is solved by the
//! Thomas algorithm with a Sherman–Morrison corner correction.
//!
//! Two-component system, written in real time:
//!
//! ```text
//! ∂Ψ₁/∂t =  jc·∂ₓΨ₂ + j(c²/ħ̃)·Ψ₁
//! ∂Ψ₂/∂t = −jc·∂ₓΨ₁ − j(c²/ħ̃)·Ψ₂
//! ```
//!
//! A plane wave Ψᵢ = uᵢ·exp[j(px − Et)/ħ̃] solves it when u₂/u₁ =
//! j(E + c²)/(c·p), the positive-branch null-space ratio. On the grid the
//! centered spatial derivative gives each Fourier mode the Hermitian
//! generator M_k = [[c²/ħ̃, jck̃], [−jck̃, −c²/ħ̃]] with k̃ = sin(k·dx)/dx;
//! Crank–Nicolson becomes an exactly unitary 2×2 Cayley rotation per mode.
//! The FFT here is only the linear-system solver for the same trapezoidal
//! scheme, not a spectral discretization.

use crate::conventions::Conventions;
use crate::kinematics::{Kinematics, KinematicsError};
use crate::planewave::OperatorForm;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error("grid needs at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("grid spacing and time step must be positive and finite, got {value}")]
    BadParameter { value: f64 },
    #[error("packet width {width} under-resolved: needs at least 4·dx = {min}")]
    WidthUnderResolved { width: f64, min: f64 },
    #[error(
        "momentum content reaches {reach:.4} rad per dx against the alias limit π; refine dx"
    )]
    MomentumAliased { reach: f64 },
    #[error("Courant number {nu} exceeds 1; refine dt or coarsen dx")]
    CourantViolation { nu: f64 },
    #[error("cyclic tridiagonal solve hit a vanishing pivot")]
    LinearSolveFailure,
    #[error("field length {got} does not match stepper plan {expect}")]
    PlanMismatch { expect: usize, got: usize },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

fn j() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Single complex field on a uniform periodic grid.
#[derive(Debug, Clone)]
pub struct GridField {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
    pub t: f64,
}

impl GridField {
    pub fn new(x0: f64, dx: f64, values: Vec<Complex64>) -> Result<GridField, EvolveError> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(EvolveError::BadParameter { value: dx });
        }
        if values.len() < 3 {
            return Err(EvolveError::TooFewPoints {
                need: 3,
                got: values.len(),
            });
        }
        Ok(GridField {
            x0,
            dx,
            values,
            t: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Discrete Born norm ∑|Ψ|²·dx.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn density_row(&self) -> DensityRow {
        let mut total = 0.0;
        let mut first = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let d = v.norm_sqr() * self.dx;
            total += d;
            first += self.x_at(i) * d;
        }
        let centroid = first / total;
        let mut second = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let d = v.norm_sqr() * self.dx;
            let dev = self.x_at(i) - centroid;
            second += dev * dev * d;
        }
        DensityRow {
            t: self.t,
            total,
            centroid,
            variance: second / total,
        }
    }
}

/// Two coupled complex fields sharing one periodic grid.
#[derive(Debug, Clone)]
pub struct PairField {
    pub x0: f64,
    pub dx: f64,
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
    pub t: f64,
}

impl PairField {
    pub fn new(
        x0: f64,
        dx: f64,
        psi1: Vec<Complex64>,
        psi2: Vec<Complex64>,
    ) -> Result<PairField, EvolveError> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(EvolveError::BadParameter { value: dx });
        }
        if psi1.len() < 3 {
            return Err(EvolveError::TooFewPoints {
                need: 3,
                got: psi1.len(),
            });
        }
        if psi1.len() != psi2.len() {
            return Err(EvolveError::PlanMismatch {
                expect: psi1.len(),
                got: psi2.len(),
            });
        }
        Ok(PairField {
            x0,
            dx,
            psi1,
            psi2,
            t: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.psi1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi1.is_empty()
    }

    /// Total density ∑(|Ψ₁|² + |Ψ₂|²)·dx.
    pub fn norm(&self) -> f64 {
        let s: f64 = self
            .psi1
            .iter()
            .chain(self.psi2.iter())
            .map(|v| v.norm_sqr())
            .sum();
        s * self.dx
    }

    pub fn density_row(&self) -> DensityRow {
        let n = self.psi1.len();
        let mut total = 0.0;
        let mut first = 0.0;
        for i in 0..n {
            let d = (self.psi1[i].norm_sqr() + self.psi2[i].norm_sqr()) * self.dx;
            total += d;
            first += (self.x0 + i as f64 * self.dx) * d;
        }
        let centroid = first / total;
        let mut second = 0.0;
        for i in 0..n {
            let d = (self.psi1[i].norm_sqr() + self.psi2[i].norm_sqr()) * self.dx;
            let dev = self.x0 + i as f64 * self.dx - centroid;
            second += dev * dev * d;
        }
        DensityRow {
            t: self.t,
            total,
            centroid,
            variance: second / total,
        }
    }
}

/// Per-step density summary.
#[derive(Debug, Clone, Copy)]
pub struct DensityRow {
    pub t: f64,
    pub total: f64,
    pub centroid: f64,
    pub variance: f64,
}

/// Least-squares line through (t, y) with coefficient of determination.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(ts: &[f64], ys: &[f64]) -> LinearFit {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        sxx += (t - mt) * (t - mt);
        sxy += (t - mt) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LinearFit {
        slope,
        intercept: my - slope * mt,
        r2,
    }
}

// ---------------------------------------------------------------------------
// Packet construction
// ---------------------------------------------------------------------------

/// Gaussian wave-packet parameters.
#[derive(Debug, Clone, Copy)]
pub struct PacketSpec {
    pub x_center: f64,
    /// Envelope width σ: the envelope is exp(−(x−x_c)²/(4σ²)).
    pub width: f64,
    pub v_center: f64,
    pub conv: Conventions,
}

fn packet_checks(spec: &PacketSpec, dx: f64, n: usize) -> Result<f64, EvolveError> {
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(EvolveError::BadParameter { value: dx });
    }
    if n < 8 {
        return Err(EvolveError::TooFewPoints { need: 8, got: n });
    }
    if spec.width < 4.0 * dx {
        return Err(EvolveError::WidthUnderResolved {
            width: spec.width,
            min: 4.0 * dx,
        });
    }
    let kin = Kinematics::from_velocity(spec.v_center, &spec.conv)?;
    // Momentum content: carrier k₀ = p/ħ̃ plus three standard deviations
    // of the envelope's wavenumber spread 1/(2σ), against the Nyquist
    // limit π/dx.
    let reach = (kin.p.abs() / spec.conv.hbar_m + 1.5 / spec.width) * dx;
    if reach > std::f64::consts::PI {
        return Err(EvolveError::MomentumAliased { reach });
    }
    Ok(kin.p)
}

/// Normalized Gaussian packet exp(−(x−x_c)²/4σ²)·exp(jp(x−x_c)/ħ̃) with
/// p = v/w, discrete norm exactly 1.
pub fn build_packet(
    spec: &PacketSpec,
    x0: f64,
    dx: f64,
    n: usize,
) -> Result<GridField, EvolveError> {
    let p = packet_checks(spec, dx, n)?;
    let mut values: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = x0 + i as f64 * dx;
            let arg = x - spec.x_center;
            let envelope = (-arg * arg / (4.0 * spec.width * spec.width)).exp();
            envelope * (j() * p * arg / spec.conv.hbar_m).exp()
        })
        .collect();
    let norm = (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt();
    for v in values.iter_mut() {
        *v /= norm;
    }
    let mut field = GridField::new(x0, dx, values)?;
    field.t = 0.0;
    Ok(field)
}

/// Equal-weight superposition of the ±p packets. The two carriers are
/// conjugates sharing one envelope, so the t = 0 samples are exactly real.
pub fn build_packet_pair(
    spec: &PacketSpec,
    x0: f64,
    dx: f64,
    n: usize,
) -> Result<GridField, EvolveError> {
    let p = packet_checks(spec, dx, n)?;
    let mut values: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = x0 + i as f64 * dx;
            let arg = x - spec.x_center;
            let envelope = (-arg * arg / (4.0 * spec.width * spec.width)).exp();
            let carrier = (j() * p * arg / spec.conv.hbar_m).exp();
            envelope * (carrier + carrier.conj())
        })
        .collect();
    let norm = (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt();
    for v in values.iter_mut() {
        *v /= norm;
    }
    let mut field = GridField::new(x0, dx, values)?;
    field.t = 0.0;
    Ok(field)
}

/// Signed physical wavenumber of DFT bin m on an n-point grid.
pub fn dft_wavenumber(m: usize, n: usize, dx: f64) -> f64 {
    let signed = if m <= n / 2 {
        m as isize
    } else {
        m as isize - n as isize
    };
    2.0 * std::f64::consts::PI * signed as f64 / (n as f64 * dx)
}

/// Momentum expectation ħ̃·⟨k⟩ from the discrete Fourier spectrum.
pub fn momentum_centroid(field: &GridField, conv: &Conventions) -> f64 {
    let n = field.values.len();
    let mut buffer = field.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
    let mut weight = 0.0;
    let mut first = 0.0;
    for (m, v) in buffer.iter().enumerate() {
        let w = v.norm_sqr();
        weight += w;
        first += dft_wavenumber(m, n, field.dx) * w;
    }
    conv.hbar_m * first / weight
}

// ---------------------------------------------------------------------------
// Scalar Crank–Nicolson stepper
// ---------------------------------------------------------------------------

/// Precomputed Crank–Nicolson plan for the scalar equation.
#[derive(Debug, Clone)]
pub struct SchrodingerStepper {
    n: usize,
    dt: f64,
    /// LHS matrix (I − j·dt/2·L): diagonal and off-diagonal entries.
    lhs_diag: Complex64,
    lhs_off: Complex64,
    /// RHS matrix (I + j·dt/2·L).
    rhs_diag: Complex64,
    rhs_off: Complex64,
    /// Kinetic coefficient A and rest rate B of ∂ₜΨ = j(AΨxx − BΨ).
    pub a_coefficient: f64,
    pub b_rate: f64,
}

impl SchrodingerStepper {
    pub fn new(
        n: usize,
        dx: f64,
        dt: f64,
        form: OperatorForm,
        conv: &Conventions,
    ) -> Result<SchrodingerStepper, EvolveError> {
        if n < 3 {
            return Err(EvolveError::TooFewPoints { need: 3, got: n });
        }
        for &v in [dx, dt].iter() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EvolveError::BadParameter { value: v });
            }
        }
        let a = form.kinetic_factor() * conv.hbar_m;
        let b = form.rest_factor() * conv.c * conv.c / conv.hbar_m;
        let half = j() * (dt / 2.0);
        // L = A·D₂ − B·I with D₂ the periodic central second difference.
        let l_diag = -2.0 * a / (dx * dx) - b;
        let l_off = a / (dx * dx);
        Ok(SchrodingerStepper {
            n,
            dt,
            lhs_diag: 1.0 - half * l_diag,
            lhs_off: -half * l_off,
            rhs_diag: 1.0 + half * l_diag,
            rhs_off: half * l_off,
            a_coefficient: a,
            b_rate: b,
        })
    }

    /// One trapezoidal step; exactly norm-conserving up to solver rounding.
    pub fn step(&self, field: &mut GridField) -> Result<(), EvolveError> {
        if field.values.len() != self.n {
            return Err(EvolveError::PlanMismatch {
                expect: self.n,
                got: field.values.len(),
            });
        }
        let n = self.n;
        let psi = &field.values;
        let rhs: Vec<Complex64> = (0..n)
            .map(|i| {
                self.rhs_diag * psi[i] + self.rhs_off * (psi[(i + 1) % n] + psi[(i + n - 1) % n])
            })
            .collect();
        field.values = solve_cyclic_tridiagonal(self.lhs_diag, self.lhs_off, &rhs)?;
        field.t += self.dt;
        Ok(())
    }

    /// Phase advance per step of the spatial mode with wavenumber k under
    /// this plan: 2·atan(dt·μ/2) with μ = A(2cos(k·dx) − 2)/dx² − B.
    pub fn mode_phase_per_step(&self, k: f64, dx: f64) -> f64 {
        let mu = self.a_coefficient * (2.0 * (k * dx).cos() - 2.0) / (dx * dx) - self.b_rate;
        2.0 * (self.dt * mu / 2.0).atan()
    }

    /// Continuum phase rate −(A·k² + B) of the same mode, the dt, dx → 0
    /// limit of mode_phase_per_step/dt.
    pub fn continuum_mode_rate(&self, k: f64) -> f64 {
        -(self.a_coefficient * k * k + self.b_rate)
    }
}

/// Solve (diag, off) cyclic tridiagonal system with constant coefficients:
/// diag·x_i + off·(x_{i−1} + x_{i+1}) = rhs_i, indices mod n.
fn solve_cyclic_tridiagonal(
    diag: Complex64,
    off: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>, EvolveError> {
    let n = rhs.len();
    if off.norm() == 0.0 {
        // Decoupled diagonal system.
        if diag.norm() == 0.0 {
            return Err(EvolveError::LinearSolveFailure);
        }
        return Ok(rhs.iter().map(|r| r / diag).collect());
    }
    // Sherman–Morrison: A = T + u·vᵀ with u = (γ, 0, …, 0, off),
    // v = (1, 0, …, 0, off/γ), where T is tridiagonal with modified
    // first and last diagonal entries.
    let gamma = -diag;
    let mut t_diag = vec![diag; n];
    t_diag[0] = diag - gamma;
    t_diag[n - 1] = diag - off * off / gamma;

    let solve_t = |d: &[Complex64], b: &[Complex64]| -> Result<Vec<Complex64>, EvolveError> {
        // Thomas algorithm with constant off-diagonals.
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut denom = d[0];
        if denom.norm() == 0.0 {
            return Err(EvolveError::LinearSolveFailure);
        }
        c_prime[0] = off / denom;
        d_prime[0] = b[0] / denom;
        for i in 1..n {
            denom = d[i] - off * c_prime[i - 1];
            if denom.norm() == 0.0 {
                return Err(EvolveError::LinearSolveFailure);
            }
            c_prime[i] = off / denom;
            d_prime[i] = (b[i] - off * d_prime[i - 1]) / denom;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[n - 1] = d_prime[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d_prime[i] - c_prime[i] * x[i + 1];
        }
        Ok(x)
    };

    let y = solve_t(&t_diag, rhs)?;
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = solve_t(&t_diag, &u)?;
    // v·x = x₀ + (off/γ)·x_{n−1}
    let v_dot = |x: &[Complex64]| x[0] + off / gamma * x[n - 1];
    let denom = 1.0 + v_dot(&z);
    if denom.norm() == 0.0 {
        return Err(EvolveError::LinearSolveFailure);
    }
    let factor = v_dot(&y) / denom;
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}

// ---------------------------------------------------------------------------
// Two-component stepper
// ---------------------------------------------------------------------------

/// Crank–Nicolson plan for the coupled pair, diagonalized per Fourier
/// mode; each mode gets a precomputed unitary 2×2 Cayley matrix.
pub struct DiracStepper {
    n: usize,
    dt: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Row-major [u11, u12, u21, u22] per mode.
    mode_matrices: Vec<[Complex64; 4]>,
}

impl DiracStepper {
    pub fn new(n: usize, dx: f64, dt: f64, conv: &Conventions) -> Result<DiracStepper, EvolveError> {
        if n < 3 {
            return Err(EvolveError::TooFewPoints { need: 3, got: n });
        }
        for &v in [dx, dt].iter() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EvolveError::BadParameter { value: v });
            }
        }
        let nu = conv.c * dt / dx;
        if nu > 1.0 {
            return Err(EvolveError::CourantViolation { nu });
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let b = conv.c * conv.c / conv.hbar_m;
        let mode_matrices = (0..n)
            .map(|m| {
                let k = dft_wavenumber(m, n, dx);
                // Central-difference symbol of ∂ₓ is j·sin(k·dx)/dx.
                let k_tilde = (k * dx).sin() / dx;
                // Hermitian generator M of dΨ̂/dt = j·M·Ψ̂.
                let m11 = Complex64::new(b, 0.0);
                let m12 = j() * conv.c * k_tilde;
                let m21 = -j() * conv.c * k_tilde;
                let m22 = Complex64::new(-b, 0.0);
                // Cayley U = (I − jdt/2·M)⁻¹(I + jdt/2·M).
                let half = j() * (dt / 2.0);
                let a11 = 1.0 - half * m11;
                let a12 = -half * m12;
                let a21 = -half * m21;
                let a22 = 1.0 - half * m22;
                let b11 = 1.0 + half * m11;
                let b12 = half * m12;
                let b21 = half * m21;
                let b22 = 1.0 + half * m22;
                let det = a11 * a22 - a12 * a21;
                let i11 = a22 / det;
                let i12 = -a12 / det;
                let i21 = -a21 / det;
                let i22 = a11 / det;
                [
                    i11 * b11 + i12 * b21,
                    i11 * b12 + i12 * b22,
                    i21 * b11 + i22 * b21,
                    i21 * b12 + i22 * b22,
                ]
            })
            .collect();
        Ok(DiracStepper {
            n,
            dt,
            forward,
            inverse,
            mode_matrices,
        })
    }

    /// One trapezoidal step of the coupled system.
    pub fn step(&self, field: &mut PairField) -> Result<(), EvolveError> {
        if field.psi1.len() != self.n {
            return Err(EvolveError::PlanMismatch {
                expect: self.n,
                got: field.psi1.len(),
            });
        }
        self.forward.process(&mut field.psi1);
        self.forward.process(&mut field.psi2);
        for (m, u) in self.mode_matrices.iter().enumerate() {
            let a = field.psi1[m];
            let b = field.psi2[m];
            field.psi1[m] = u[0] * a + u[1] * b;
            field.psi2[m] = u[2] * a + u[3] * b;
        }
        self.inverse.process(&mut field.psi1);
        self.inverse.process(&mut field.psi2);
        let scale = 1.0 / self.n as f64;
        for v in field.psi1.iter_mut().chain(field.psi2.iter_mut()) {
            *v *= scale;
        }
        field.t += self.dt;
        Ok(())
    }

    /// |Eigenfrequency| of the grid mode with wavenumber k:
    /// Ω(k) = √((c²/ħ̃)² + c²k̃²), the discrete stand-in for E/ħ̃.
    pub fn mode_frequency(k: f64, dx: f64, conv: &Conventions) -> f64 {
        let b = conv.c * conv.c / conv.hbar_m;
        let k_tilde = (k * dx).sin() / dx;
        (b * b + conv.c * conv.c * k_tilde * k_tilde).sqrt()
    }

    /// Phase advance per step on the eigenvector pair: ±2·atan(dt·Ω/2).
    pub fn mode_phase_per_step(k: f64, dx: f64, dt: f64, conv: &Conventions) -> f64 {
        2.0 * (dt * DiracStepper::mode_frequency(k, dx, conv) / 2.0).atan()
    }
}

/// Plane-wave pair initial data from an on-shell amplitude ratio:
/// Ψ₁ = u₁·e^{jpx/ħ̃}, Ψ₂ = u₂·e^{jpx/ħ̃}.
pub fn plane_wave_pair(
    u1: Complex64,
    u2: Complex64,
    p: f64,
    x0: f64,
    dx: f64,
    n: usize,
    conv: &Conventions,
) -> Result<PairField, EvolveError> {
    let carrier = |i: usize| -> Complex64 {
        let x = x0 + i as f64 * dx;
        (j() * p * x / conv.hbar_m).exp()
    };
    PairField::new(
        x0,
        dx,
        (0..n).map(|i| u1 * carrier(i)).collect(),
        (0..n).map(|i| u2 * carrier(i)).collect(),
    )
}
