//! Physical constants (CODATA 2018) and the unit conversions the engine needs.
//!
//! Everything downstream works in SI; electron-volt frequencies appear only
//! at input parsing and output formatting.

use crate::error::{Error, Result};

/// Fixed physical constants, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Speed of light in vacuum (m/s).
    pub c: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Electron volt (J).
    pub ev: f64,
}

/// CODATA 2018 exact values.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    ev: 1.602_176_634e-19,
};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = CODATA_2018.hbar;
/// Speed of light in vacuum (m/s).
pub const C: f64 = CODATA_2018.c;
/// Boltzmann constant (J/K).
pub const K_B: f64 = CODATA_2018.k_b;
/// Electron volt (J).
pub const EV: f64 = CODATA_2018.ev;

pub(crate) const PI: f64 = std::f64::consts::PI;

/// Convert a photon energy in eV to an angular frequency in rad/s.
pub fn ev_to_angular_frequency(energy_ev: f64) -> Result<f64> {
    if energy_ev < 0.0 || !energy_ev.is_finite() {
        return Err(Error::Domain(format!(
            "energy must be finite and non-negative, got {energy_ev} eV"
        )));
    }
    Ok(energy_ev * EV / HBAR)
}

/// l-th Matsubara frequency xi_l = 2 pi l k_B T / hbar (rad/s).
pub fn matsubara_frequency(l: u32, temperature: f64) -> Result<f64> {
    Ok(f64::from(l) * matsubara_spacing(temperature)?)
}

/// Spacing xi_1 = 2 pi k_B T / hbar between Matsubara frequencies (rad/s).
///
/// `matsubara_frequency(l, T)` is exactly `l * matsubara_spacing(T)` in
/// floating point: both go through the same product.
pub fn matsubara_spacing(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {temperature} K"
        )));
    }
    Ok(2.0 * PI * K_B * temperature / HBAR)
}

/// Thermal wavelength hbar c / (k_B T) (m), the gap scale above which the
/// Matsubara sum is dominated by its l = 0 term.
pub fn thermal_wavelength(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!(
            "temperature must be positive and finite, got {temperature} K"
        )));
    }
    Ok(HBAR * C / (K_B * temperature))
}
