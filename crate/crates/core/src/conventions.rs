//! Global unit and sign conventions shared by every module.

use std::fmt;

/// A ± sign used in phase conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Parses "+1", "1", "-1" (and "+"/"-").
    pub fn parse(text: &str) -> Option<Sign> {
        match text.trim() {
            "+1" | "1" | "+" => Some(Sign::Plus),
            "-1" | "-" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Unit system and phase-sign registry.
///
/// A plane wave evaluates as `amp · exp[j(s·p·x − ε·E·t)/ħ̃]` where
/// `ε = energy_sign` and `s = spatial_sign`. Both ± choices are first-class
/// because neither follows uniquely from the separation-of-variables step
/// they originate from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conventions {
    /// Speed of light (velocity units).
    pub c: f64,
    /// Action constant per unit rest mass ħ̃ (velocity²·time).
    pub hbar_m: f64,
    /// Temporal phase sign ε.
    pub energy_sign: Sign,
    /// Spatial phase sign s.
    pub spatial_sign: Sign,
    /// Velocity guard as a fraction of c; |v| must stay strictly below
    /// `c·velocity_guard` so the Lorentz root cannot underflow.
    pub velocity_guard: f64,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            c: 1.0,
            hbar_m: 1.0,
            energy_sign: Sign::Plus,
            spatial_sign: Sign::Plus,
            velocity_guard: 1.0 - 1e-9,
        }
    }
}

impl Conventions {
    /// Natural units with explicit phase signs.
    pub fn natural(energy_sign: Sign, spatial_sign: Sign) -> Self {
        Conventions {
            energy_sign,
            spatial_sign,
            ..Conventions::default()
        }
    }

    /// Largest speed the guard admits.
    pub fn max_speed(&self) -> f64 {
        self.c * self.velocity_guard
    }
}
