//! Position jitter of a free particle built from two opposite-phase
//! components.
//!
//! The interference of the two components displaces the position
//! expectation by ±σ·ħ̃/… around the mean trajectory; the relevant
//! quantities per unit rest mass are
//!
//! ```text
//! σ(v)  = v / (c·(w + 1))            mixing ratio, 0 ≤ σ < 1
//! Δx(v) = 2ħ̃ / (c·(w + 1))           oscillation amplitude
//! τ(v)  = 2ħ̃σ/v² = 2ħ̃/(v·c·(w+1))   oscillation period, v ≠ 0
//! ```
//!
//! with w = √(1 − v²/c²). The amplitude grows from ħ̃/c at rest toward
//! (but never reaching) 2ħ̃/c as |v| → c. Supplying a physical mass and
//! the dimensional ħ turns the rest amplitude into ħ/(m·c), the reduced
//! Compton length.

use crate::conventions::Conventions;
use crate::kinematics::{lorentz_factor, KinematicsError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum JitterError {
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("jitter period is undefined at v = 0")]
    ZeroVelocity,
}

/// Mixing ratio σ = v/(c(w+1)). Stays in [0, 1), which is what permits
/// reading 1 ± jσ as exp(±jσ) to first order.
pub fn jitter_sigma(v: f64, conv: &Conventions) -> Result<f64, KinematicsError> {
    let w = lorentz_factor(v, conv)?;
    Ok(v / (conv.c * (w + 1.0)))
}

/// Oscillation amplitude 2ħ̃/(c(w+1)) per unit rest mass.
pub fn jitter_amplitude(v: f64, conv: &Conventions) -> Result<f64, KinematicsError> {
    let w = lorentz_factor(v, conv)?;
    Ok(2.0 * conv.hbar_m / (conv.c * (w + 1.0)))
}

/// Oscillation period 2ħ̃σ/v². Undefined for a particle at rest.
pub fn jitter_period(v: f64, conv: &Conventions) -> Result<f64, JitterError> {
    if v == 0.0 {
        return Err(JitterError::ZeroVelocity);
    }
    let sigma = jitter_sigma(v, conv)?;
    Ok(2.0 * conv.hbar_m * sigma / (v * v))
}

/// Dimensional amplitude 2ħ/(m·c·(w+1)) for a particle of mass `mass`,
/// with `hbar` and `c` in matching units.
pub fn jitter_amplitude_with_mass(
    v: f64,
    hbar: f64,
    mass: f64,
    c: f64,
) -> Result<f64, KinematicsError> {
    let conv = Conventions {
        c,
        hbar_m: hbar / mass,
        ..Conventions::default()
    };
    jitter_amplitude(v, &conv)
}

/// CODATA-rounded constants for the electron benchmark.
pub const HBAR_SI: f64 = 1.054572e-34;
pub const ELECTRON_MASS_SI: f64 = 9.109384e-31;
pub const LIGHT_SPEED_SI: f64 = 2.997925e8;

/// Rest-limit amplitude ħ/(m_e·c), the electron's reduced Compton length.
pub fn electron_rest_amplitude() -> f64 {
    HBAR_SI / (ELECTRON_MASS_SI * LIGHT_SPEED_SI)
}
