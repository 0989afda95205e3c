//! Proximity Force Approximation for the re-entrant cavity.
//!
//! The membrane faces a cylindrical post of cap radius `r0` that widens to
//! `r1` a step height `h` below the cap. PFA writes the Casimir spring
//! constant `k_C = F_C'(x)` at gap `x` as surface integrals of the
//! plane-parallel quantities:
//!
//! ```text
//! k_C = pi r0^2 F'_PP(x)
//!     + (2 pi (r1 - r0) / h)   [r1 F_PP(x + h) - r0 F_PP(x)]
//!     + (2 pi (r1 - r0)^2 / h^2) [E_PP(x + h) - E_PP(x)]
//! ```
//!
//! The first (cap) term dominates for tall posts; the sidewall terms are
//! suppressed by 1/h and 1/h^2 and are reported separately so that claim is
//! checkable rather than assumed. For perfectly conducting surfaces at T = 0
//! the cap term has the closed form `k_C = pi^3 hbar c r0^2 / (60 x^5)`,
//! used as an independent oracle and as the ideal upper envelope for real
//! metals.

use serde::Serialize;

use crate::constants::{C, HBAR, PI};
use crate::error::{Error, Result};
use crate::lifshitz::{LifshitzEvaluator, LifshitzResult};

/// Post geometry: cap radius, outer step radius, and step height (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReentrantGeometry {
    /// Post cap radius r0, m.
    pub r0: f64,
    /// Outer radius r1 >= r0 of the step below the cap, m.
    pub r1: f64,
    /// Step height h, m.
    pub h: f64,
}

impl Default for ReentrantGeometry {
    /// Placeholder dimensions satisfying gap << r0 across the swept range.
    fn default() -> Self {
        Self {
            r0: 200e-6,
            r1: 300e-6,
            h: 500e-6,
        }
    }
}

impl ReentrantGeometry {
    pub fn new(r0: f64, r1: f64, h: f64) -> Result<Self> {
        let g = Self { r0, r1, h };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::Domain(format!(
                "cap radius must be positive, got {:e} m",
                self.r0
            )));
        }
        if !(self.r1 >= self.r0 && self.r1.is_finite()) {
            return Err(Error::Domain(format!(
                "outer radius {:e} m must be >= cap radius {:e} m",
                self.r1, self.r0
            )));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Domain(format!(
                "step height must be positive, got {:e} m",
                self.h
            )));
        }
        Ok(())
    }
}

/// Which assembly produced a [`SpringResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpringFormula {
    /// Cap term plus both sidewall terms.
    Full,
    /// Cap term only.
    CapOnly,
    /// Closed-form ideal-mirror limit, no quadrature.
    PerfectConductor,
}

impl SpringFormula {
    pub fn as_str(self) -> &'static str {
        match self {
            SpringFormula::Full => "full",
            SpringFormula::CapOnly => "cap-only",
            SpringFormula::PerfectConductor => "perfect-conductor",
        }
    }
}

/// The three assembly terms, N/m. `k_C` is exactly their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpringBreakdown {
    pub cap: f64,
    pub sidewall_force: f64,
    pub sidewall_energy: f64,
}

/// Spring constant of the cavity with its provenance and error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpringResult {
    /// Casimir spring constant, N/m. Positive for metal pairs.
    pub k_c: f64,
    /// Propagated engine error estimate, N/m.
    pub est_error: f64,
    /// Casimir force at the same gap, N, when the assembly computed it.
    pub f_c: Option<f64>,
    pub breakdown: SpringBreakdown,
    pub provenance: SpringFormula,
    /// Integrand evaluations across all engine calls.
    pub n_evals: u64,
}

/// Cap-only spring constant `pi r0^2 F'_PP(x)`.
pub fn spring_constant_cap_only(
    geom: &ReentrantGeometry,
    engine: &LifshitzEvaluator,
    x: f64,
) -> Result<SpringResult> {
    geom.validate()?;
    let area = PI * geom.r0 * geom.r0;
    let grad = engine.pressure_gradient(x)?;
    let cap = area * grad.value;
    Ok(SpringResult {
        k_c: cap,
        est_error: area * grad.est_error,
        f_c: None,
        breakdown: SpringBreakdown {
            cap,
            sidewall_force: 0.0,
            sidewall_energy: 0.0,
        },
        provenance: SpringFormula::CapOnly,
        n_evals: grad.n_evals,
    })
}

/// Full assembly including the two sidewall terms.
///
/// When `r1 == r0` the sidewall prefactors vanish identically and the engine
/// is not consulted for the x + h quantities.
pub fn spring_constant_full(
    geom: &ReentrantGeometry,
    engine: &LifshitzEvaluator,
    x: f64,
) -> Result<SpringResult> {
    geom.validate()?;
    let cap_only = spring_constant_cap_only(geom, engine, x)?;
    if geom.r1 == geom.r0 {
        return Ok(SpringResult {
            provenance: SpringFormula::Full,
            ..cap_only
        });
    }

    let dr = geom.r1 - geom.r0;
    let force_pref = 2.0 * PI * dr / geom.h;
    let energy_pref = 2.0 * PI * dr * dr / (geom.h * geom.h);

    let f_near = engine.pressure(x)?;
    let f_far = engine.pressure(x + geom.h)?;
    let e_near = engine.energy_per_area(x)?;
    let e_far = engine.energy_per_area(x + geom.h)?;

    let sidewall_force = force_pref * (geom.r1 * f_far.value - geom.r0 * f_near.value);
    let sidewall_energy = energy_pref * (e_far.value - e_near.value);
    let breakdown = SpringBreakdown {
        cap: cap_only.k_c,
        sidewall_force,
        sidewall_energy,
    };
    let est_error = cap_only.est_error
        + force_pref.abs() * (geom.r1 * f_far.est_error + geom.r0 * f_near.est_error)
        + energy_pref * (e_far.est_error + e_near.est_error);
    Ok(SpringResult {
        k_c: breakdown.cap + breakdown.sidewall_force + breakdown.sidewall_energy,
        est_error,
        f_c: None,
        breakdown,
        provenance: SpringFormula::Full,
        n_evals: cap_only.n_evals + f_near.n_evals + f_far.n_evals + e_near.n_evals + e_far.n_evals,
    })
}

/// Ideal-mirror closed form `pi^3 hbar c r0^2 / (60 x^5)`, exact to double
/// precision, independent of temperature and of the Lifshitz engine.
pub fn spring_constant_perfect_conductor(geom: &ReentrantGeometry, x: f64) -> SpringResult {
    let k_c = PI.powi(3) * HBAR * C * geom.r0 * geom.r0 / (60.0 * x.powi(5));
    SpringResult {
        k_c,
        est_error: 0.0,
        f_c: None,
        breakdown: SpringBreakdown {
            cap: k_c,
            sidewall_force: 0.0,
            sidewall_energy: 0.0,
        },
        provenance: SpringFormula::PerfectConductor,
        n_evals: 0,
    }
}

/// Casimir force on the cap, `pi r0^2 F_PP(x)` in newtons. Negative values
/// mean attraction toward the post.
pub fn casimir_force_cap_only(
    geom: &ReentrantGeometry,
    engine: &LifshitzEvaluator,
    x: f64,
) -> Result<LifshitzResult> {
    geom.validate()?;
    let area = PI * geom.r0 * geom.r0;
    let p = engine.pressure(x)?;
    Ok(LifshitzResult {
        value: area * p.value,
        est_error: area * p.est_error,
        ..p
    })
}

/// Elastic spring constant of the coated membrane, N/m, for ratio reporting
/// against `k_C`. Known coatings only.
pub fn membrane_spring_constant(coating: &str) -> Option<f64> {
    match coating.to_ascii_lowercase().as_str() {
        "au" => Some(572.0),
        "nb" => Some(949.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifshitz::{EngineConfig, HalfSpacePair};
    use crate::materials::{builtin_material, MaterialModel};

    fn engine(pair: HalfSpacePair) -> LifshitzEvaluator {
        LifshitzEvaluator::new(pair, 300.0, EngineConfig::default()).unwrap()
    }

    fn au_al() -> LifshitzEvaluator {
        engine(HalfSpacePair::new(
            builtin_material("Al").unwrap(),
            builtin_material("Au").unwrap(),
        ))
    }

    fn pc() -> LifshitzEvaluator {
        engine(HalfSpacePair::symmetric(MaterialModel::perfect_conductor()))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // pi^3 hbar c r0^2 / (60 x^5) at r0 = 200 um, x = 1 um, evaluated with
    // 30-digit arithmetic.
    #[test]
    fn perfect_conductor_closed_form_value() {
        let geom = ReentrantGeometry::default();
        let r = spring_constant_perfect_conductor(&geom, 1e-6);
        assert!(rel(r.k_c, 6.535144920743388e-4) < 1e-12, "{:e}", r.k_c);
        assert_eq!(r.est_error, 0.0);
        assert_eq!(r.n_evals, 0);
        assert_eq!(r.provenance, SpringFormula::PerfectConductor);
    }

    #[test]
    fn closed_form_scalings_are_exact() {
        let g1 = ReentrantGeometry::default();
        let g2 = ReentrantGeometry {
            r0: 2.0 * g1.r0,
            ..g1
        };
        let base = spring_constant_perfect_conductor(&g1, 1e-6).k_c;
        assert_eq!(spring_constant_perfect_conductor(&g2, 1e-6).k_c, 4.0 * base);
        assert_eq!(
            spring_constant_perfect_conductor(&g1, 0.5e-6).k_c,
            32.0 * base
        );
        let degenerate = ReentrantGeometry { r0: 0.0, ..g1 };
        assert_eq!(
            spring_constant_perfect_conductor(&degenerate, 1e-6).k_c,
            0.0
        );
    }

    #[test]
    fn engine_pc_matches_closed_form_at_small_gap() {
        // thermal and finite-gap corrections shrink as x -> 0; 0.1 um is
        // deep in the ideal regime
        let geom = ReentrantGeometry::default();
        let x = 0.1e-6;
        let ideal = spring_constant_perfect_conductor(&geom, x).k_c;
        let full = spring_constant_cap_only(&geom, &pc(), x).unwrap().k_c;
        assert!(
            rel(full, ideal) < 1e-2,
            "engine {full:e} vs ideal {ideal:e}"
        );
    }

    // Anchors from the same independent 30-digit implementation used for the
    // engine tests, multiplied by pi r0^2.
    #[test]
    fn au_al_spring_anchor() {
        let geom = ReentrantGeometry::default();
        let r = spring_constant_cap_only(&geom, &au_al(), 1e-6).unwrap();
        assert!(rel(r.k_c, 5.09719338611692e-4) < 1e-6, "{:e}", r.k_c);
        assert!(r.k_c > 0.0 && r.est_error >= 0.0 && r.n_evals > 0);
    }

    #[test]
    fn nb_al_spring_anchor() {
        let geom = ReentrantGeometry::default();
        let nb = engine(HalfSpacePair::new(
            builtin_material("Al").unwrap(),
            builtin_material("Nb").unwrap(),
        ));
        let r = spring_constant_cap_only(&geom, &nb, 1e-6).unwrap();
        assert!(rel(r.k_c, 5.05390143866150e-4) < 1e-6, "{:e}", r.k_c);
    }

    #[test]
    fn cap_scales_with_r0_squared() {
        let ev = au_al();
        let g1 = ReentrantGeometry::default();
        let g2 = ReentrantGeometry {
            r0: 2.0 * g1.r0,
            r1: 2.0 * g1.r1,
            ..g1
        };
        let k1 = spring_constant_cap_only(&g1, &ev, 1e-6).unwrap().k_c;
        let k2 = spring_constant_cap_only(&g2, &ev, 1e-6).unwrap().k_c;
        assert_eq!(k2, 4.0 * k1);
    }

    #[test]
    fn degenerate_step_reduces_to_cap_only() {
        let ev = au_al();
        let geom = ReentrantGeometry {
            r1: 200e-6,
            ..ReentrantGeometry::default()
        };
        let cap = spring_constant_cap_only(&geom, &ev, 1e-6).unwrap();
        let full = spring_constant_full(&geom, &ev, 1e-6).unwrap();
        assert_eq!(full.k_c, cap.k_c);
        assert_eq!(full.breakdown.sidewall_force, 0.0);
        assert_eq!(full.breakdown.sidewall_energy, 0.0);
        // the x + h engine calls must have been skipped entirely
        assert_eq!(full.n_evals, cap.n_evals);
        assert_eq!(full.provenance, SpringFormula::Full);
    }

    #[test]
    fn k_c_is_exact_sum_of_breakdown() {
        let ev = au_al();
        let geom = ReentrantGeometry::default();
        let r = spring_constant_full(&geom, &ev, 1e-6).unwrap();
        let sum = r.breakdown.cap + r.breakdown.sidewall_force + r.breakdown.sidewall_energy;
        assert_eq!(r.k_c, sum);
    }

    #[test]
    fn sidewall_terms_are_suppressed_and_scale_inversely_with_h() {
        // with (r1 - r0)/r0 = 0.5 the force sidewall settles near
        // 2 (r1-r0) |F| / (h r0 F') ~ 2.5e-5 of the cap at h = 1e4 x, and
        // halves when h doubles
        let ev = au_al();
        let x = 1e-6;
        let tall = ReentrantGeometry {
            h: 1e4 * x,
            ..ReentrantGeometry::default()
        };
        let taller = ReentrantGeometry { h: 2e4 * x, ..tall };
        let r1 = spring_constant_full(&tall, &ev, x).unwrap();
        let r2 = spring_constant_full(&taller, &ev, x).unwrap();
        let frac1 =
            (r1.breakdown.sidewall_force + r1.breakdown.sidewall_energy).abs() / r1.breakdown.cap;
        let frac2 =
            (r2.breakdown.sidewall_force + r2.breakdown.sidewall_energy).abs() / r2.breakdown.cap;
        assert!(frac1 < 1e-4, "sidewall fraction {frac1:e}");
        assert!(
            (frac1 / frac2 - 2.0).abs() < 0.05,
            "1/h scaling: {frac1:e} vs {frac2:e}"
        );
    }

    #[test]
    fn default_geometry_sidewalls_below_one_percent() {
        let ev = au_al();
        let geom = ReentrantGeometry::default();
        for x in [0.59e-6, 1e-6, 3.3e-6] {
            let r = spring_constant_full(&geom, &ev, x).unwrap();
            let frac = (r.k_c - r.breakdown.cap).abs() / r.breakdown.cap;
            assert!(frac < 1e-2, "x={x:e}: sidewall fraction {frac:e}");
        }
    }

    #[test]
    fn force_anchor_and_finite_difference_consistency() {
        let geom = ReentrantGeometry::default();
        // ideal pressure times cap area at x = 0.5 um; thermal correction
        // ~1e-4 relative
        let f = casimir_force_cap_only(&geom, &pc(), 0.5e-6).unwrap();
        assert!(rel(f.value, -2.614057968297355e-9) < 1e-3, "{:e}", f.value);
        assert!(f.value < 0.0);

        let ev = au_al();
        let x = 1e-6;
        let h = 1e-3 * x;
        let fp = casimir_force_cap_only(&geom, &ev, x + h).unwrap().value;
        let fm = casimir_force_cap_only(&geom, &ev, x - h).unwrap().value;
        let fd = (fp - fm) / (2.0 * h);
        let k = spring_constant_cap_only(&geom, &ev, x).unwrap().k_c;
        assert!(rel(fd, k) < 1e-4, "fd {fd:e} vs k {k:e}");
    }

    #[test]
    fn geometry_validation() {
        assert!(ReentrantGeometry::new(200e-6, 300e-6, 500e-6).is_ok());
        assert!(ReentrantGeometry::new(0.0, 300e-6, 500e-6).is_err());
        assert!(ReentrantGeometry::new(300e-6, 200e-6, 500e-6).is_err());
        assert!(ReentrantGeometry::new(200e-6, 300e-6, 0.0).is_err());
        let bad = ReentrantGeometry {
            r0: -1.0,
            ..ReentrantGeometry::default()
        };
        assert!(spring_constant_cap_only(&bad, &au_al(), 1e-6).is_err());
    }

    #[test]
    fn membrane_constants() {
        assert_eq!(membrane_spring_constant("Au"), Some(572.0));
        assert_eq!(membrane_spring_constant("au"), Some(572.0));
        assert_eq!(membrane_spring_constant("Nb"), Some(949.0));
        assert_eq!(membrane_spring_constant("Al"), None);
        assert_eq!(membrane_spring_constant("PC"), None);
    }
}
