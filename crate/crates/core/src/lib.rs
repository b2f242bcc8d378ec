//! Verification workbench for 1+1D relativistic wave mechanics.
//!
//! Everything is normalized per unit rest mass: energies are velocity²,
//! momenta are velocities, and `hbar_m` is the action constant divided by
//! the rest mass. A [`conventions::Conventions`] value carries the unit
//! system and the two ± sign choices (temporal and spatial phase) that
//! every evaluator consumes, so a sign flip never has to be hunted down
//! inside a formula.
//!
//! The crate is organized by role:
//!
//! - [`kinematics`]: Lorentz factor root, energy/momentum pairs, and the
//!   binomial energy expansion.
//! - [`expr`] / [`metric`]: a small closed-form expression grammar and
//!   stationary metric profiles (closed-form or sampled).
//! - [`geodesic`]: fixed-step world-line integration with conserved
//!   quantity monitoring.
//! - [`planewave`]: harmonic wave functions, the dispersive wave-operator
//!   residual (closed form and finite differences), Born densities.
//! - [`algebra`]: exact 2×2 matrix arithmetic over Gaussian integers and
//!   matrix polynomials; anticommutation condition checks.
//! - [`spinor`]: the on-shell 2×2 mode matrix, null-space spinors, and the
//!   first-order-pair elimination cross-check.
//! - [`jitter`]: spin-phase jitter angle, period, and position amplitude.
//! - [`action`]: phase accumulation along world lines and the discrete
//!   least-action verification.
//! - [`maxwell`]: the massless two-field hyperbolic system on a staggered
//!   grid.
//! - [`evolve`]: norm-conserving implicit evolution of the scalar and
//!   two-component systems on periodic grids.

pub mod action;
pub mod algebra;
pub mod conventions;
pub mod evolve;
pub mod expr;
pub mod geodesic;
pub mod jitter;
pub mod kinematics;
pub mod maxwell;
pub mod metric;
pub mod planewave;
pub mod spinor;

pub use conventions::{Conventions, Sign};
pub use kinematics::Kinematics;
