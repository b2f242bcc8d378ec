//! Relativistic kinematics per unit rest mass.
//!
//! The central quantity is the Lorentz factor root `w = √(1 − v²/c²)`
//! (the reciprocal of the usual γ), from which energy `E = c²/w` and
//! momentum `p = v/w` follow. The pair satisfies the exact identity
//! `(E/c)² − p² = c²`.

use crate::conventions::Conventions;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("velocity {v} exceeds the guard {limit} (w → 0 singularity)")]
    VelocityOutOfRange { v: f64, limit: f64 },
}

/// Checks |v| against the convention's velocity guard.
pub fn guard_velocity(v: f64, conv: &Conventions) -> Result<(), KinematicsError> {
    let limit = conv.max_speed();
    if !v.is_finite() || v.abs() >= limit {
        return Err(KinematicsError::VelocityOutOfRange { v, limit });
    }
    Ok(())
}

/// Lorentz factor root w ∈ (0, 1].
pub fn lorentz_factor(v: f64, conv: &Conventions) -> Result<f64, KinematicsError> {
    guard_velocity(v, conv)?;
    let ratio = v / conv.c;
    Ok((1.0 - ratio * ratio).sqrt())
}

/// Velocity, Lorentz root, and the energy/momentum pair per unit rest mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub v: f64,
    pub w: f64,
    /// E = c²/w (velocity² units).
    pub e: f64,
    /// p = v/w (velocity units).
    pub p: f64,
}

impl Kinematics {
    pub fn from_velocity(v: f64, conv: &Conventions) -> Result<Kinematics, KinematicsError> {
        let w = lorentz_factor(v, conv)?;
        Ok(Kinematics {
            v,
            w,
            e: conv.c * conv.c / w,
            p: v / w,
        })
    }

    /// (E/c)² − p² − c²; zero up to rounding for any admissible v.
    pub fn dispersion_identity_residual(&self, conv: &Conventions) -> f64 {
        let ec = self.e / conv.c;
        ec * ec - self.p * self.p - conv.c * conv.c
    }
}

/// Truncated binomial expansion of E = c²/w:
/// `c²·Σ_{k=0..=order} a_k (v/c)^{2k}` with a₀ = 1, a_{k+1} = a_k(2k+1)/(2k+2),
/// i.e. c²(1 + ½(v/c)² + ⅜(v/c)⁴ + …). Partial sums increase monotonically
/// toward c²/w for 0 < |v| < c.
pub fn energy_expansion(v: f64, conv: &Conventions, order: usize) -> Result<f64, KinematicsError> {
    guard_velocity(v, conv)?;
    let x = (v / conv.c) * (v / conv.c);
    let mut coeff = 1.0f64;
    let mut power = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..order {
        coeff *= (2 * k + 1) as f64 / (2 * k + 2) as f64;
        power *= x;
        sum += coeff * power;
    }
    Ok(conv.c * conv.c * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conv() -> Conventions {
        Conventions::default()
    }

    #[test]
    fn rest_case() {
        assert_eq!(lorentz_factor(0.0, &conv()).unwrap(), 1.0);
        let k = Kinematics::from_velocity(0.0, &conv()).unwrap();
        assert_eq!(k.e, 1.0);
        assert_eq!(k.p, 0.0);
    }

    #[test]
    fn three_four_five_triangle() {
        let k = Kinematics::from_velocity(0.6, &conv()).unwrap();
        assert!((k.w - 0.8).abs() < 1e-15);
        assert!((k.e - 1.25).abs() < 1e-15);
        assert!((k.p - 0.75).abs() < 1e-15);
        // 1.5625 − 0.5625 = 1
        assert!(k.dispersion_identity_residual(&conv()).abs() < 1e-15);
    }

    #[test]
    fn lightlike_velocity_rejected() {
        assert!(matches!(
            lorentz_factor(1.0, &conv()),
            Err(KinematicsError::VelocityOutOfRange { .. })
        ));
        assert!(matches!(
            lorentz_factor(-1.0, &conv()),
            Err(KinematicsError::VelocityOutOfRange { .. })
        ));
        assert!(lorentz_factor(f64::NAN, &conv()).is_err());
    }

    #[test]
    fn guard_is_configurable() {
        let mut c = conv();
        c.velocity_guard = 0.5;
        assert!(lorentz_factor(0.6, &c).is_err());
        assert!(lorentz_factor(0.4, &c).is_ok());
    }

    #[test]
    fn expansion_low_orders() {
        // order 1: c² + ½v² = 1.18 at v = 0.6
        let e1 = energy_expansion(0.6, &conv(), 1).unwrap();
        assert!((e1 - 1.18).abs() < 1e-15);
        // order 2 adds ⅜v⁴ = 0.0486
        let e2 = energy_expansion(0.6, &conv(), 2).unwrap();
        assert!((e2 - 1.2286).abs() < 1e-15);
        // v = 0: every order gives c²
        assert_eq!(energy_expansion(0.0, &conv(), 17).unwrap(), 1.0);
    }

    #[test]
    fn expansion_converges_to_closed_form() {
        let k = Kinematics::from_velocity(0.6, &conv()).unwrap();
        let e = energy_expansion(0.6, &conv(), 200).unwrap();
        assert!((e - k.e).abs() < 1e-12);
    }
}
