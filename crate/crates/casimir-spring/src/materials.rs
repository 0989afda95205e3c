//! Dielectric permittivity models on the imaginary frequency axis.
//!
//! The built-in metals use a Drude response
//! `eps(i xi) = 1 + Omega^2 / (xi (xi + gamma))` with tabulated plasma and
//! relaxation frequencies. A perfect conductor is a first-class variant
//! rather than a large-Omega Drude model so that the ideal-mirror limit
//! (r_TE = -1, r_TM = +1) is exact.

use crate::constants::{self, C};
use crate::error::{Error, Result};

/// Drude parameters, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    /// Plasma frequency Omega.
    pub plasma_freq: f64,
    /// Relaxation frequency gamma.
    pub relaxation_freq: f64,
}

/// Dielectric response of one half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Response {
    Drude(DrudeParams),
    PerfectConductor,
    Vacuum,
}

/// A named material with its dielectric response.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub name: String,
    pub response: Response,
}

/// Names accepted by [`builtin_material`].
pub const BUILTIN_NAMES: [&str; 5] = ["Au", "Nb", "Al", "PC", "vacuum"];

/// Drude parameters of the built-in metals in eV/hbar: (name, Omega, gamma).
pub const BUILTIN_DRUDE_EV: [(&str, f64, f64); 3] =
    [("Au", 9.0, 0.035), ("Nb", 9.9, 0.2), ("Al", 13.0, 0.1)];

impl MaterialModel {
    /// Drude metal from parameters in rad/s.
    pub fn drude(name: impl Into<String>, plasma_freq: f64, relaxation_freq: f64) -> Result<Self> {
        if !(plasma_freq > 0.0 && relaxation_freq > 0.0) {
            return Err(Error::Domain(format!(
                "Drude parameters must be positive, got Omega = {plasma_freq}, gamma = {relaxation_freq}"
            )));
        }
        Ok(Self {
            name: name.into(),
            response: Response::Drude(DrudeParams {
                plasma_freq,
                relaxation_freq,
            }),
        })
    }

    /// Drude metal from parameters in eV/hbar.
    pub fn drude_ev(name: impl Into<String>, omega_ev: f64, gamma_ev: f64) -> Result<Self> {
        let plasma = constants::ev_to_angular_frequency(omega_ev)?;
        let relax = constants::ev_to_angular_frequency(gamma_ev)?;
        Self::drude(name, plasma, relax)
    }

    pub fn perfect_conductor() -> Self {
        Self {
            name: "PC".into(),
            response: Response::PerfectConductor,
        }
    }

    pub fn vacuum() -> Self {
        Self {
            name: "vacuum".into(),
            response: Response::Vacuum,
        }
    }

    /// Permittivity eps(i xi) at imaginary frequency xi > 0 (rad/s).
    ///
    /// The xi = 0 limit is singular for a Drude metal and is handled
    /// separately by [`crate::reflection::zero_frequency_limits`].
    pub fn permittivity(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::Domain(format!(
                "imaginary frequency must be positive and finite, got {xi} rad/s"
            )));
        }
        match self.response {
            Response::Vacuum => Ok(1.0),
            Response::Drude(p) => {
                Ok(1.0 + p.plasma_freq * p.plasma_freq / (xi * (xi + p.relaxation_freq)))
            }
            Response::PerfectConductor => Err(Error::UnsupportedModel {
                model: self.name.clone(),
                operation: "a finite permittivity (handle the perfect conductor before calling)",
            }),
        }
    }

    /// Plasma penetration depth c / Omega (m) of a Drude metal.
    pub fn penetration_depth(&self) -> Result<f64> {
        match self.response {
            Response::Drude(p) => Ok(C / p.plasma_freq),
            _ => Err(Error::UnsupportedModel {
                model: self.name.clone(),
                operation: "a penetration depth (only Drude metals have one)",
            }),
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.response == Response::Vacuum
    }
}

/// Look up a built-in material by name (case-insensitive):
/// the Drude metals Au, Nb, Al, the perfect conductor `PC`, and `vacuum`.
pub fn builtin_material(name: &str) -> Result<MaterialModel> {
    let lower = name.to_ascii_lowercase();
    for (n, omega_ev, gamma_ev) in BUILTIN_DRUDE_EV {
        if lower == n.to_ascii_lowercase() {
            return MaterialModel::drude_ev(n, omega_ev, gamma_ev);
        }
    }
    match lower.as_str() {
        "pc" => Ok(MaterialModel::perfect_conductor()),
        "vacuum" => Ok(MaterialModel::vacuum()),
        _ => Err(Error::UnknownMaterial {
            name: name.into(),
            known: BUILTIN_NAMES.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_angular_frequency;
    use proptest::prelude::*;

    #[test]
    fn builtin_lookup() {
        for (name, omega_ev, gamma_ev) in BUILTIN_DRUDE_EV {
            let m = builtin_material(name).unwrap();
            match m.response {
                Response::Drude(p) => {
                    let omega = ev_to_angular_frequency(omega_ev).unwrap();
                    let gamma = ev_to_angular_frequency(gamma_ev).unwrap();
                    assert_eq!(p.plasma_freq, omega);
                    assert_eq!(p.relaxation_freq, gamma);
                }
                _ => panic!("built-in metal {name} should be Drude"),
            }
        }
        assert!(builtin_material("au").is_ok());
        assert!(builtin_material("VACUUM").is_ok());
        assert!(matches!(
            builtin_material("Cu"),
            Err(Error::UnknownMaterial { .. })
        ));
        let msg = builtin_material("Cu").unwrap_err().to_string();
        for n in BUILTIN_NAMES {
            assert!(msg.contains(n), "error should list `{n}`: {msg}");
        }
    }

    #[test]
    fn permittivity_values() {
        // Au at xi = 1 eV/hbar: 1 + 81/(1*1.035) = 79.26087
        let au = builtin_material("Au").unwrap();
        let xi = ev_to_angular_frequency(1.0).unwrap();
        let eps = au.permittivity(xi).unwrap();
        assert!((eps - 79.260_869_565_217_4).abs() / eps < 1e-12);

        // Al at its own plasma frequency: 1 + 169/(13*13.1) = 1.9923664
        let al = builtin_material("Al").unwrap();
        let xi = ev_to_angular_frequency(13.0).unwrap();
        let eps = al.permittivity(xi).unwrap();
        assert!((eps - 1.992_366_412_213_74).abs() / eps < 1e-12);

        let vac = MaterialModel::vacuum();
        for xi in [1.0, 1e10, 1e16] {
            assert_eq!(vac.permittivity(xi).unwrap(), 1.0);
        }

        assert!(au.permittivity(0.0).is_err());
        assert!(au.permittivity(-1.0).is_err());
        assert!(MaterialModel::perfect_conductor()
            .permittivity(1e15)
            .is_err());
    }

    #[test]
    fn drude_monotone_decreasing_to_one() {
        let au = builtin_material("Au").unwrap();
        let omega = ev_to_angular_frequency(9.0).unwrap();
        let mut prev = f64::INFINITY;
        for k in -6..=6 {
            let xi = omega * 10f64.powi(k);
            let eps = au.permittivity(xi).unwrap();
            assert!(eps > 1.0);
            assert!(eps < prev);
            prev = eps;
        }
        assert!(au.permittivity(1e6 * omega).unwrap() - 1.0 < 1e-10);
    }

    #[test]
    fn drude_low_frequency_scaling() {
        // xi (eps - 1) -> Omega^2 / gamma as xi -> 0+
        for name in ["Au", "Nb", "Al"] {
            let m = builtin_material(name).unwrap();
            let (omega, gamma) = match m.response {
                Response::Drude(p) => (p.plasma_freq, p.relaxation_freq),
                _ => unreachable!(),
            };
            let xi = 1e-8 * gamma;
            let lhs = xi * (m.permittivity(xi).unwrap() - 1.0);
            let rhs = omega * omega / gamma;
            assert!((lhs - rhs).abs() / rhs < 1e-6);
        }
    }

    #[test]
    fn penetration_depths_tens_of_nanometers() {
        // hbar c / Omega: Au 21.9 nm, Nb 19.9 nm, Al 15.2 nm
        let expected = [("Au", 21.925e-9), ("Nb", 19.932e-9), ("Al", 15.179e-9)];
        for (name, d) in expected {
            let depth = builtin_material(name).unwrap().penetration_depth().unwrap();
            assert!((depth - d).abs() < 0.1e-9, "{name}: {depth}");
            assert!(depth > 10e-9 && depth < 30e-9);
        }
        assert!(MaterialModel::vacuum().penetration_depth().is_err());
        assert!(MaterialModel::perfect_conductor()
            .penetration_depth()
            .is_err());
    }

    #[test]
    fn invalid_drude_params_rejected() {
        assert!(MaterialModel::drude("x", 0.0, 1.0).is_err());
        assert!(MaterialModel::drude("x", 1.0, -1.0).is_err());
    }

    proptest! {
        // eps(i xi) > 1 and strictly decreasing for any positive Drude metal.
        #[test]
        fn prop_drude_bounds(
            omega_ev in 0.5f64..30.0,
            gamma_ev in 1e-3f64..1.0,
            xi_scale in -4f64..4.0,
            step in 1.01f64..10.0,
        ) {
            let m = MaterialModel::drude_ev("m", omega_ev, gamma_ev).unwrap();
            let xi = ev_to_angular_frequency(omega_ev).unwrap() * 10f64.powf(xi_scale);
            let e1 = m.permittivity(xi).unwrap();
            let e2 = m.permittivity(xi * step).unwrap();
            prop_assert!(e1 > 1.0);
            prop_assert!(e2 > 1.0);
            prop_assert!(e2 < e1);
        }
    }
}
