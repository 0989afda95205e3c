//! Fresnel reflection coefficients at imaginary frequency for a
//! vacuum / half-space interface.
//!
//! With q = sqrt(xi^2/c^2 + k_perp^2) and s = sqrt(eps xi^2/c^2 + k_perp^2),
//!
//! ```text
//! r_TE = (q - s) / (q + s)          r_TM = (eps q - s) / (eps q + s)
//! ```
//!
//! For a Drude metal the product eps xi^2 is formed as
//! xi^2 + Omega^2 xi / (xi + gamma), which stays finite as xi -> 0 even
//! though eps itself diverges; r_TM uses 1/eps for the same reason. The
//! xi = 0 Matsubara term must always go through [`zero_frequency_limits`]
//! instead of the general formulas.

use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{MaterialModel, Response};

/// Momenta entering the Fresnel coefficients at one (material, xi, k_perp).
#[derive(Debug, Clone, Copy)]
pub struct WaveNumbers {
    /// Imaginary frequency (rad/s).
    pub xi: f64,
    /// In-plane momentum (1/m).
    pub k_perp: f64,
    /// Vacuum axial momentum q = sqrt(xi^2/c^2 + k_perp^2) (1/m).
    pub q: f64,
    /// Medium axial momentum s = sqrt(eps xi^2/c^2 + k_perp^2) (1/m).
    pub s: f64,
}

/// Compute [`WaveNumbers`] for a Drude or vacuum half-space.
pub fn wave_numbers(m: &MaterialModel, xi: f64, k_perp: f64) -> Result<WaveNumbers> {
    check_args(xi, k_perp)?;
    let eps_xi2_c2 = match SurfaceResponse::at(m, xi)? {
        SurfaceResponse::Dielectric { eps_xi2_c2, .. } => eps_xi2_c2,
        SurfaceResponse::Transparent => (xi / C) * (xi / C),
        SurfaceResponse::Mirror => {
            return Err(Error::UnsupportedModel {
                model: m.name.clone(),
                operation: "wave numbers (s is not finite for a perfect conductor)",
            })
        }
    };
    let q = (k_perp * k_perp + (xi / C) * (xi / C)).sqrt();
    let s = (k_perp * k_perp + eps_xi2_c2).sqrt();
    Ok(WaveNumbers { xi, k_perp, q, s })
}

/// TE (s-polarization) reflection coefficient. In [-1, 0] for eps >= 1.
pub fn fresnel_te(m: &MaterialModel, xi: f64, k_perp: f64) -> Result<f64> {
    if let Response::PerfectConductor = m.response {
        check_k_perp(k_perp)?;
        return Ok(-1.0);
    }
    check_args(xi, k_perp)?;
    let surface = SurfaceResponse::at(m, xi)?;
    let q = (k_perp * k_perp + (xi / C) * (xi / C)).sqrt();
    Ok(surface.reflect(q, k_perp * k_perp).0)
}

/// TM (p-polarization) reflection coefficient. In [0, 1] for eps >= 1.
pub fn fresnel_tm(m: &MaterialModel, xi: f64, k_perp: f64) -> Result<f64> {
    if let Response::PerfectConductor = m.response {
        check_k_perp(k_perp)?;
        return Ok(1.0);
    }
    check_args(xi, k_perp)?;
    let surface = SurfaceResponse::at(m, xi)?;
    let q = (k_perp * k_perp + (xi / C) * (xi / C)).sqrt();
    Ok(surface.reflect(q, k_perp * k_perp).1)
}

/// Analytic xi -> 0+ limits (r_TE, r_TM), used for the l = 0 Matsubara term.
///
/// For a Drude metal eps xi^2 -> 0 (so r_TE -> 0) while eps -> infinity
/// (so r_TM -> 1); a perfect conductor keeps (-1, 1) and vacuum reflects
/// nothing.
pub fn zero_frequency_limits(m: &MaterialModel) -> (f64, f64) {
    match m.response {
        Response::Drude(_) => (0.0, 1.0),
        Response::PerfectConductor => (-1.0, 1.0),
        Response::Vacuum => (0.0, 0.0),
    }
}

fn check_k_perp(k_perp: f64) -> Result<()> {
    if !(k_perp > 0.0 && k_perp.is_finite()) {
        return Err(Error::Domain(format!(
            "k_perp must be positive and finite, got {k_perp} 1/m"
        )));
    }
    Ok(())
}

fn check_args(xi: f64, k_perp: f64) -> Result<()> {
    check_k_perp(k_perp)?;
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!(
            "xi must be positive and finite (use zero_frequency_limits for the l = 0 term), got {xi} rad/s"
        )));
    }
    Ok(())
}

/// One half-space evaluated at a fixed imaginary frequency; this is what the
/// Lifshitz engine caches per Matsubara index.
#[derive(Debug, Clone, Copy)]
pub(crate) enum SurfaceResponse {
    /// Perfect conductor: (-1, +1) at every momentum.
    Mirror,
    /// Vacuum: no reflection.
    Transparent,
    /// Drude or other finite-permittivity model.
    Dielectric {
        /// 1/eps, kept so r_TM never multiplies by a huge eps.
        inv_eps: f64,
        /// eps xi^2 / c^2, formed without the eps * xi^2 cancellation.
        eps_xi2_c2: f64,
    },
}

impl SurfaceResponse {
    /// Evaluate a material at xi > 0.
    pub(crate) fn at(m: &MaterialModel, xi: f64) -> Result<Self> {
        match m.response {
            Response::PerfectConductor => Ok(SurfaceResponse::Mirror),
            Response::Vacuum => Ok(SurfaceResponse::Transparent),
            Response::Drude(p) => {
                let om2 = p.plasma_freq * p.plasma_freq;
                let inv_eps = xi * (xi + p.relaxation_freq) / (xi * (xi + p.relaxation_freq) + om2);
                // eps xi^2 = xi^2 + Omega^2 xi / (xi + gamma)
                let eps_xi2 = xi * xi + om2 * xi / (xi + p.relaxation_freq);
                Ok(SurfaceResponse::Dielectric {
                    inv_eps,
                    eps_xi2_c2: eps_xi2 / (C * C),
                })
            }
        }
    }

    /// (r_TE, r_TM) given the vacuum momentum q and k_perp^2; the caller
    /// supplies both so q can be shared between the two facing surfaces.
    #[inline]
    pub(crate) fn reflect(&self, q: f64, k_perp_sq: f64) -> (f64, f64) {
        match *self {
            SurfaceResponse::Mirror => (-1.0, 1.0),
            SurfaceResponse::Transparent => (0.0, 0.0),
            SurfaceResponse::Dielectric {
                inv_eps,
                eps_xi2_c2,
                ..
            } => {
                let s = (k_perp_sq + eps_xi2_c2).sqrt();
                let r_te = (q - s) / (q + s);
                // (eps q - s) / (eps q + s), written via 1/eps for stability
                let s_over_eps = s * inv_eps;
                let r_tm = (q - s_over_eps) / (q + s_over_eps);
                (r_te, r_tm)
            }
        }
    }
}
