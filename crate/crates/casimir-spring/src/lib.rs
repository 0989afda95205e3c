//! Thermal Casimir spring constants for a narrow-gap re-entrant cavity.
//!
//! This crate evaluates the finite-temperature Lifshitz formula for two
//! facing metallic half-spaces and assembles, via the Proximity Force
//! Approximation, the Casimir contribution `k_C` to the spring constant of
//! a metal-coated membrane suspended above a re-entrant post. Its headline
//! output is the ratio `k_C / k_S` between the Casimir spring constant and
//! the membrane's elastic spring constant across the experimentally probed
//! gap range.
//!
//! Start with [`sweep::run_sweep`] for the full gap sweep, or
//! [`lifshitz::LifshitzEvaluator`] for plane-parallel quantities at a single
//! point. The `examples/` directory has one runnable program per capability.

pub mod config;
pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod pfa;
mod quad;
pub mod reflection;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
