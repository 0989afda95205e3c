//! Slow reference oracles and differencing harnesses for the fast engine.
//!
//! Three independent checks live here:
//!
//! 1. [`reference_energy_per_area`]: the same Matsubara sum as the engine,
//!    evaluated by brute force: a fixed composite two-point Gauss rule on
//!    20 000 uniform panels per term over `y in [y_l, 60]`, summing every
//!    frequency up to a hard cutoff `y_l > 50`. It calls only the public
//!    Fresnel functions and shares no integration or caching code with the
//!    engine, so agreement is a meaningful cross-check, not a tautology.
//! 2. [`finite_difference`]: central differencing used to verify that
//!    pressure and pressure gradient really are the analytic derivatives
//!    the engine claims, without trusting the engine's own calculus.
//! 3. The hand-derivable closed form `E_0 = -k_B T zeta(3) / (16 pi a^2)`
//!    for the l = 0 term of a Drude pair, hard-coded in the tests, which
//!    catches sign and half-weight mistakes on its own.
//!
//! [`validate_engine`] bundles all of it into a serialisable report.

use serde::Serialize;

use crate::constants::{matsubara_spacing, C, K_B, PI};
use crate::error::Result;
use crate::lifshitz::{EngineConfig, HalfSpacePair, LifshitzEvaluator, ThermalGap};
use crate::reflection::{fresnel_te, fresnel_tm, zero_frequency_limits};

/// Uniform panels per Matsubara term in the reference quadrature.
const REF_PANELS: usize = 20_000;
/// Upper integration limit; e^-60 is far below double precision relevance.
const REF_Y_MAX: f64 = 60.0;
/// Terms with y_l above this are dropped (relative weight < e^-50).
const REF_Y_CUTOFF: f64 = 50.0;

/// Gauss-Legendre 2-point node offset from the panel midpoint, +-w/(2 sqrt 3).
const GL2_OFFSET: f64 = 0.288_675_134_594_812_87;

/// One Matsubara term of the reference energy (including the l = 0 half
/// weight), J/m^2. Brute force; exposed so the analytic l = 0 oracle can be
/// checked against the reference alone.
pub fn reference_energy_term(pair: &HalfSpacePair, tg: &ThermalGap, l: u32) -> f64 {
    if pair.is_trivially_zero() {
        return 0.0;
    }
    let a = tg.a;
    let xi =
        f64::from(l) * matsubara_spacing(tg.temperature).expect("T > 0 by ThermalGap invariant");
    let y_l = 2.0 * a * xi / C;
    let (r_prod_te0, r_prod_tm0) = {
        let z1 = zero_frequency_limits(&pair.side_1);
        let z2 = zero_frequency_limits(&pair.side_2);
        (z1.0 * z2.0, z1.1 * z2.1)
    };

    let f = |y: f64| -> f64 {
        let (r_te, r_tm) = if l == 0 {
            (r_prod_te0, r_prod_tm0)
        } else {
            let k_perp = ((y - y_l) * (y + y_l)).sqrt() / (2.0 * a);
            let r1_te =
                fresnel_te(&pair.side_1, xi, k_perp).expect("interior Gauss nodes keep k_perp > 0");
            let r2_te = fresnel_te(&pair.side_2, xi, k_perp).expect("as above");
            let r1_tm = fresnel_tm(&pair.side_1, xi, k_perp).expect("as above");
            let r2_tm = fresnel_tm(&pair.side_2, xi, k_perp).expect("as above");
            (r1_te * r2_te, r1_tm * r2_tm)
        };
        let e = (-y).exp();
        y * ((-r_te * e).ln_1p() + (-r_tm * e).ln_1p())
    };

    let width = (REF_Y_MAX - y_l) / REF_PANELS as f64;
    let mut sum = 0.0;
    for i in 0..REF_PANELS {
        let mid = y_l + (i as f64 + 0.5) * width;
        let off = GL2_OFFSET * width;
        sum += f(mid - off) + f(mid + off);
    }
    let integral = 0.5 * width * sum;
    let weight = if l == 0 { 0.5 } else { 1.0 };
    weight * K_B * tg.temperature / (8.0 * PI * a * a) * integral
}

/// Brute-force Lifshitz energy per unit area, J/m^2.
pub fn reference_energy_per_area(pair: &HalfSpacePair, tg: &ThermalGap) -> f64 {
    if pair.is_trivially_zero() {
        return 0.0;
    }
    let xi_1 = matsubara_spacing(tg.temperature).expect("T > 0 by ThermalGap invariant");
    let mut total = 0.0;
    let mut l = 0u32;
    loop {
        let y_l = 2.0 * tg.a * f64::from(l) * xi_1 / C;
        if y_l > REF_Y_CUTOFF {
            return total;
        }
        total += reference_energy_term(pair, tg, l);
        l += 1;
    }
}

/// Central difference (f(a + d) - f(a - d)) / (2 d) with d = step_frac * a.
pub fn finite_difference<F: FnMut(f64) -> f64>(mut f: F, a: f64, step_frac: f64) -> f64 {
    assert!(a > 0.0, "finite_difference needs a > 0, got {a:e}");
    assert!(
        step_frac > 1e-8 && step_frac < 1e-2,
        "step_frac must lie in (1e-8, 1e-2), got {step_frac:e}"
    );
    let d = step_frac * a;
    (f(a + d) - f(a - d)) / (2.0 * d)
}

/// One evaluation point for [`validate_engine`].
#[derive(Debug, Clone)]
pub struct ValidationPoint {
    pub tg: ThermalGap,
    pub pair: HalfSpacePair,
}

/// Deviations at one point; infinite when the engine failed to converge.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub gap_m: f64,
    pub temperature_k: f64,
    pub side_1: String,
    pub side_2: String,
    /// |engine - reference| / |reference| for the energy.
    pub energy_dev: f64,
    /// Engine pressure vs -d/da of engine energy by central difference.
    pub pressure_dev: f64,
    /// Engine gradient vs d/da of engine pressure by central difference.
    pub gradient_dev: f64,
    pub max_dev: f64,
}

/// Aggregated validation outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub points: Vec<PointReport>,
    pub tolerance: f64,
    pub max_deviation: f64,
    /// True iff max_deviation < tolerance.
    pub pass: bool,
}

/// Relative deviation with the 0/0 case counted as perfect agreement.
fn deviation(got: f64, want: f64) -> f64 {
    if got == want {
        return 0.0;
    }
    if want == 0.0 {
        return f64::INFINITY;
    }
    ((got - want) / want).abs()
}

/// Step used by the derivative-chain checks.
const CHAIN_STEP_FRAC: f64 = 1e-4;

/// Engine configuration for the differencing chains. Central differencing
/// divides the engine's own error by 2 * step_frac * a, so the chains need
/// roughly three extra digits of engine accuracy to resolve 1e-5 agreement.
fn chain_config() -> EngineConfig {
    EngineConfig {
        quad_rel_tol: 1e-12,
        matsubara_rel_tol: 1e-13,
        ..EngineConfig::default()
    }
}

/// Default acceptance grid: the experimental gap range endpoints and
/// interior points for a gold-coated membrane above an aluminium post.
pub fn default_validation_points() -> Vec<ValidationPoint> {
    let au = crate::materials::builtin_material("Au").expect("builtin");
    let al = crate::materials::builtin_material("Al").expect("builtin");
    [0.59e-6, 1.0e-6, 1.7e-6, 2.5e-6, 3.3e-6]
        .into_iter()
        .map(|a| ValidationPoint {
            tg: ThermalGap::new(a, 300.0).expect("static grid is valid"),
            pair: HalfSpacePair::new(al.clone(), au.clone()),
        })
        .collect()
}

/// Run engine-vs-reference and derivative-chain checks at every point.
///
/// Engine convergence failures become infinite deviations in the report
/// rather than errors; the report is assembled in input order.
pub fn validate_engine(points: &[ValidationPoint], tolerance: f64) -> ValidationReport {
    assert!(
        !points.is_empty(),
        "validate_engine needs at least one point"
    );
    let mut reports = Vec::with_capacity(points.len());
    for p in points {
        reports.push(validate_point(p));
    }
    let max_deviation = reports.iter().map(|r| r.max_dev).fold(0.0f64, f64::max);
    ValidationReport {
        points: reports,
        tolerance,
        max_deviation,
        pass: max_deviation < tolerance,
    }
}

fn validate_point(p: &ValidationPoint) -> PointReport {
    let energy_dev = (|| -> Result<f64> {
        let engine =
            LifshitzEvaluator::new(p.pair.clone(), p.tg.temperature, EngineConfig::default())?;
        let e = engine.energy_per_area(p.tg.a)?.value;
        // skip the expensive reference when the trivial short-circuit applies
        if p.pair.is_trivially_zero() {
            return Ok(deviation(e, 0.0));
        }
        Ok(deviation(e, reference_energy_per_area(&p.pair, &p.tg)))
    })()
    .unwrap_or(f64::INFINITY);

    let chains = (|| -> Result<(f64, f64)> {
        let tight = LifshitzEvaluator::new(p.pair.clone(), p.tg.temperature, chain_config())?;
        let a = p.tg.a;
        let f = tight.pressure(a)?.value;
        let g = tight.pressure_gradient(a)?.value;

        let mut failed = false;
        let fd_energy = finite_difference(
            |x| match tight.energy_per_area(x) {
                Ok(r) => r.value,
                Err(_) => {
                    failed = true;
                    f64::NAN
                }
            },
            a,
            CHAIN_STEP_FRAC,
        );
        let fd_pressure = finite_difference(
            |x| match tight.pressure(x) {
                Ok(r) => r.value,
                Err(_) => {
                    failed = true;
                    f64::NAN
                }
            },
            a,
            CHAIN_STEP_FRAC,
        );
        if failed {
            return Ok((f64::INFINITY, f64::INFINITY));
        }
        Ok((deviation(-fd_energy, f), deviation(fd_pressure, g)))
    })()
    .unwrap_or((f64::INFINITY, f64::INFINITY));

    let (pressure_dev, gradient_dev) = chains;
    PointReport {
        gap_m: p.tg.a,
        temperature_k: p.tg.temperature,
        side_1: p.pair.side_1.name.clone(),
        side_2: p.pair.side_2.name.clone(),
        energy_dev,
        pressure_dev,
        gradient_dev,
        max_dev: energy_dev.max(pressure_dev).max(gradient_dev),
    }
}
