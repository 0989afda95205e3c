//! Finite-temperature Lifshitz formula for two facing half-spaces.
//!
//! The Casimir energy per unit area of two parallel half-spaces separated by
//! a vacuum gap `a` at temperature `T` is the Matsubara sum
//!
//! ```text
//! E_PP(a) = (k_B T / 2pi) sum_{l>=0}' int_0^inf dk k sum_{alpha} ln(1 - u_alpha)
//! u_alpha = r1_alpha r2_alpha e^{-2 a q_l},   q_l = sqrt(xi_l^2/c^2 + k^2)
//! ```
//!
//! where the prime gives the `l = 0` term weight one-half and `alpha` runs
//! over the TE and TM polarizations. The pressure `F_PP = -dE_PP/da` and the
//! pressure gradient `F'_PP` are obtained by differentiating under the
//! integral sign, not by numerical differentiation.
//!
//! # Numerical scheme
//!
//! At fixed `xi_l` the substitution `k dk = q dq` followed by `y = 2 a q`
//! turns each integral into a dimensionless one over `y in [y_l, inf)` with
//! `y_l = 2 a xi_l / c`:
//!
//! ```text
//! energy:   I1 = int y   sum ln(1 - u) dy          E    = + kB T/(8 pi a^2) * sum' I1
//! pressure: I2 = int y^2 sum u/(1-u) dy            F    = - kB T/(8 pi a^3) * sum' I2
//! gradient: I3 = int y^3 sum u/(1-u)^2 dy          F'   = + kB T/(8 pi a^4) * sum' I3
//! ```
//!
//! with `u = r1 r2 e^{-y}`. Each integral is evaluated on geometric panels
//! `[y_l, Y+1], [Y+1, Y+2], [Y+2, Y+4], ...` with `Y = max(y_l, 1)`, each
//! panel by adaptive Gauss-Kronrod, until the analytic envelope bound on the
//! remaining tail (from `0 <= u <= e^{-y}`) drops below `quad_rel_tol` of the
//! accumulated value. The Matsubara sum stops at the first `l` where three
//! consecutive terms each contribute less than `matsubara_rel_tol` of the
//! running sum, but never before `xi_l` exceeds five times the dominant
//! frequency `c/(2a)`.

use serde::Serialize;

use crate::constants::{matsubara_spacing, C, K_B, PI};
use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quad::integrate_adaptive;
use crate::reflection::{zero_frequency_limits, SurfaceResponse};

/// The two facing half-spaces: side 1 is the post, side 2 the membrane
/// coating.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpacePair {
    pub side_1: MaterialModel,
    pub side_2: MaterialModel,
}

impl HalfSpacePair {
    pub fn new(side_1: MaterialModel, side_2: MaterialModel) -> Self {
        Self { side_1, side_2 }
    }

    /// Both sides the same material.
    pub fn symmetric(m: MaterialModel) -> Self {
        Self {
            side_1: m.clone(),
            side_2: m,
        }
    }

    /// True when either side is vacuum, making every reflection coefficient
    /// and hence the whole interaction vanish.
    pub fn is_trivially_zero(&self) -> bool {
        self.side_1.is_vacuum() || self.side_2.is_vacuum()
    }
}

/// Evaluation point of the engine: gap width `a` (m) and temperature (K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalGap {
    /// Gap width in metres, > 0.
    pub a: f64,
    /// Temperature in kelvin, > 0.
    pub temperature: f64,
}

impl ThermalGap {
    pub fn new(a: f64, temperature: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!(
                "gap width must be positive, got {a:e} m"
            )));
        }
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "temperature must be positive, got {temperature:e} K"
            )));
        }
        Ok(Self { a, temperature })
    }
}

/// Convergence knobs for the engine.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineConfig {
    /// Relative tolerance for each Matsubara term's y-integral.
    pub quad_rel_tol: f64,
    /// Relative tolerance for truncating the Matsubara sum.
    pub matsubara_rel_tol: f64,
    /// Hard cap on the number of Matsubara frequencies.
    pub l_max_cap: u32,
    /// Panel bisection budget shared across one term's integrals.
    pub quad_max_subdivisions: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-9,
            matsubara_rel_tol: 1e-10,
            l_max_cap: 2000,
            quad_max_subdivisions: 200,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("matsubara_rel_tol", self.matsubara_rel_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!(
                    "{name} must lie in (0, 1), got {v:e}"
                )));
            }
        }
        if self.l_max_cap < 1 || self.quad_max_subdivisions < 1 {
            return Err(Error::Domain(
                "l_max_cap and quad_max_subdivisions must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Which plane-parallel quantity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// Energy per unit area, J/m^2.
    Energy,
    /// Force per unit area -dE/da, N/m^2.
    Pressure,
    /// Pressure derivative dF/da, N/m^3.
    Gradient,
}

impl Quantity {
    /// Power of y weighting the dimensionless integrand (1, 2 or 3).
    fn power(self) -> i32 {
        match self {
            Quantity::Energy => 1,
            Quantity::Pressure => 2,
            Quantity::Gradient => 3,
        }
    }

    /// Overall sign of the physical prefactor.
    fn sign(self) -> f64 {
        match self {
            Quantity::Pressure => -1.0,
            _ => 1.0,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Quantity::Energy => "J/m^2",
            Quantity::Pressure => "N/m^2",
            Quantity::Gradient => "N/m^3",
        }
    }
}

/// One engine evaluation: the value, a conservative error estimate in the
/// same units, and the work done.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifshitzResult {
    pub value: f64,
    /// Quadrature error estimates plus analytic truncation tail bounds.
    pub est_error: f64,
    /// Matsubara terms summed, l = 0 always included.
    pub n_matsubara: u32,
    /// Integrand evaluations across all terms.
    pub n_evals: u64,
}

/// Outcome of one term's y-integration, before physical prefactors.
struct TermQuad {
    integral: f64,
    abs_err: f64,
    n_evals: u64,
}

/// Upper bound on `2 * int_Y^inf y^p u/(1-u)^2 dy` (which also bounds the
/// energy and pressure integrands) using `u <= e^{-y}`:
/// `2 (1 - e^{-Y})^{-2} Gamma(p+1, Y)` with the incomplete gamma in closed
/// form for p = 1, 2, 3.
fn tail_bound(power: i32, y: f64) -> f64 {
    let e = (-y).exp();
    let gamma = match power {
        1 => (y + 1.0) * e,
        2 => ((y + 2.0) * y + 2.0) * e,
        3 => (((y + 3.0) * y + 6.0) * y + 6.0) * e,
        _ => unreachable!("integrand powers are 1..=3"),
    };
    let c = 1.0 / (1.0 - e);
    2.0 * c * c * gamma
}

/// Reusable engine for one (material pair, temperature, config) triple.
///
/// Construction validates the config and precomputes the dielectric response
/// of both sides at every Matsubara frequency up to `l_max_cap`, so the
/// cache is complete before any parallel evaluation starts and all methods
/// take `&self`.
pub struct LifshitzEvaluator {
    pair: HalfSpacePair,
    temperature: f64,
    cfg: EngineConfig,
    /// Matsubara spacing 2 pi k_B T / hbar, rad/s.
    xi_1: f64,
    /// Response of each side at xi_l, index l - 1.
    surfaces_1: Vec<SurfaceResponse>,
    surfaces_2: Vec<SurfaceResponse>,
    /// Products of the two sides' zero-frequency reflection limits (TE, TM).
    zero_r: (f64, f64),
}

impl LifshitzEvaluator {
    pub fn new(pair: HalfSpacePair, temperature: f64, cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let xi_1 = matsubara_spacing(temperature)?;
        let n = cfg.l_max_cap as usize;
        let mut surfaces_1 = Vec::with_capacity(n);
        let mut surfaces_2 = Vec::with_capacity(n);
        for l in 1..=cfg.l_max_cap {
            let xi = f64::from(l) * xi_1;
            surfaces_1.push(SurfaceResponse::at(&pair.side_1, xi)?);
            surfaces_2.push(SurfaceResponse::at(&pair.side_2, xi)?);
        }
        let z1 = zero_frequency_limits(&pair.side_1);
        let z2 = zero_frequency_limits(&pair.side_2);
        Ok(Self {
            pair,
            temperature,
            cfg,
            xi_1,
            surfaces_1,
            surfaces_2,
            zero_r: (z1.0 * z2.0, z1.1 * z2.1),
        })
    }

    pub fn pair(&self) -> &HalfSpacePair {
        &self.pair
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Energy per unit area E_PP(a), J/m^2. Negative for metal pairs.
    pub fn energy_per_area(&self, gap: f64) -> Result<LifshitzResult> {
        self.evaluate(gap, Quantity::Energy)
    }

    /// Pressure F_PP(a) = -dE_PP/da, N/m^2. Negative means attraction.
    pub fn pressure(&self, gap: f64) -> Result<LifshitzResult> {
        self.evaluate(gap, Quantity::Pressure)
    }

    /// Pressure gradient F'_PP(a) = dF_PP/da, N/m^3. Positive for metals.
    pub fn pressure_gradient(&self, gap: f64) -> Result<LifshitzResult> {
        self.evaluate(gap, Quantity::Gradient)
    }

    /// Full Matsubara sum for one quantity at gap `a` (m).
    pub fn evaluate(&self, gap: f64, kind: Quantity) -> Result<LifshitzResult> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::Domain(format!(
                "gap width must be positive, got {gap:e} m"
            )));
        }
        if self.pair.is_trivially_zero() {
            return Ok(LifshitzResult {
                value: 0.0,
                est_error: 0.0,
                n_matsubara: 1,
                n_evals: 0,
            });
        }

        let (mut sum, mut err, mut evals) = match self.term_integral(gap, 0, kind) {
            Ok(t) => (0.5 * t.integral, 0.5 * t.abs_err, t.n_evals),
            Err(t) => {
                return Err(self.convergence(
                    "quadrature subdivision budget exhausted at l=0".into(),
                    gap,
                    kind,
                    0.5 * t.integral,
                    0.5 * t.abs_err,
                    1,
                    t.n_evals,
                ));
            }
        };

        let mut streak = 0u32;
        let mut l = 1u32;
        let last = loop {
            if l > self.cfg.l_max_cap {
                return Err(self.convergence(
                    format!(
                        "Matsubara sum did not settle within l_max_cap={}",
                        self.cfg.l_max_cap
                    ),
                    gap,
                    kind,
                    sum,
                    err,
                    l,
                    evals,
                ));
            }
            let t = match self.term_integral(gap, l, kind) {
                Ok(t) => t,
                Err(t) => {
                    return Err(self.convergence(
                        format!("quadrature subdivision budget exhausted at l={l}"),
                        gap,
                        kind,
                        sum + t.integral,
                        err + t.abs_err,
                        l + 1,
                        evals + t.n_evals,
                    ));
                }
            };
            sum += t.integral;
            err += t.abs_err;
            evals += t.n_evals;

            if t.integral.abs() < self.cfg.matsubara_rel_tol * sum.abs() {
                streak += 1;
            } else {
                streak = 0;
            }
            // never truncate before xi_l exceeds 5x the dominant frequency
            if streak >= 3 && self.y_lower(gap, l) > 5.0 {
                break t.integral;
            }
            l += 1;
        };

        // Geometric bound on the dropped terms: successive term magnitudes
        // shrink at least by rho = e^{-y_1} ((l+1)/l)^3, which is < 1 once
        // y_l > 5 has been enforced.
        let l_stop = f64::from(l);
        let rho = (-self.y_lower(gap, 1)).exp() * ((l_stop + 1.0) / l_stop).powi(3);
        debug_assert!(rho < 1.0, "truncation ratio {rho} not contractive");
        err += last.abs() * rho / (1.0 - rho);

        let (pref, sign) = self.prefactor(gap, kind);
        Ok(LifshitzResult {
            value: sign * pref * sum,
            est_error: pref * err,
            n_matsubara: l + 1,
            n_evals: evals,
        })
    }

    /// Single-l contribution in physical units, including the one-half
    /// weight at l = 0. Summing over l reproduces [`Self::evaluate`].
    pub fn matsubara_term(&self, gap: f64, l: u32, kind: Quantity) -> Result<f64> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::Domain(format!(
                "gap width must be positive, got {gap:e} m"
            )));
        }
        if self.pair.is_trivially_zero() {
            return Ok(0.0);
        }
        let weight = if l == 0 { 0.5 } else { 1.0 };
        let (pref, sign) = self.prefactor(gap, kind);
        match self.term_integral(gap, l, kind) {
            Ok(t) => Ok(sign * pref * weight * t.integral),
            Err(t) => Err(self.convergence(
                format!("quadrature subdivision budget exhausted at l={l}"),
                gap,
                kind,
                weight * t.integral,
                weight * t.abs_err,
                l.max(1),
                t.n_evals,
            )),
        }
    }

    /// Magnitude and sign of k_B T / (8 pi a^(1+p)).
    fn prefactor(&self, gap: f64, kind: Quantity) -> (f64, f64) {
        let p = kind.power();
        let pref = K_B * self.temperature / (8.0 * PI * gap.powi(1 + p));
        (pref, kind.sign())
    }

    /// Dimensionless lower integration limit y_l = 2 a xi_l / c.
    fn y_lower(&self, gap: f64, l: u32) -> f64 {
        2.0 * gap * f64::from(l) * self.xi_1 / C
    }

    /// Response of one side at xi_l, from the cache when l is within it.
    fn surface(&self, cache: &[SurfaceResponse], side: &MaterialModel, l: u32) -> SurfaceResponse {
        match cache.get(l as usize - 1) {
            Some(s) => *s,
            None => SurfaceResponse::at(side, f64::from(l) * self.xi_1)
                .expect("xi_l > 0 for l >= 1, response cannot fail"),
        }
    }

    /// One term's dimensionless y-integral over geometric panels.
    ///
    /// `Err` carries whatever accumulated when the bisection budget ran out.
    fn term_integral(
        &self,
        gap: f64,
        l: u32,
        kind: Quantity,
    ) -> std::result::Result<TermQuad, TermQuad> {
        let y_l = self.y_lower(gap, l);
        let p = kind.power();
        let (s1, s2) = if l == 0 {
            (SurfaceResponse::Transparent, SurfaceResponse::Transparent)
        } else {
            (
                self.surface(&self.surfaces_1, &self.pair.side_1, l),
                self.surface(&self.surfaces_2, &self.pair.side_2, l),
            )
        };
        let zero_r = self.zero_r;
        let inv_2a = 1.0 / (2.0 * gap);
        let inv_4a2 = inv_2a * inv_2a;

        let f = |y: f64| -> f64 {
            let (r_te, r_tm) = if l == 0 {
                zero_r
            } else {
                // rounding can push y^2 - y_l^2 a hair below zero at the
                // lower panel edge's innermost nodes
                let k_perp_sq = ((y * y - y_l * y_l) * inv_4a2).max(0.0);
                let q = y * inv_2a;
                let (a_te, a_tm) = s1.reflect(q, k_perp_sq);
                let (b_te, b_tm) = s2.reflect(q, k_perp_sq);
                (a_te * b_te, a_tm * b_tm)
            };
            let e = (-y).exp();
            let u_te = r_te * e;
            let u_tm = r_tm * e;
            debug_assert!(
                (0.0..1.0).contains(&u_te) && (0.0..1.0).contains(&u_tm),
                "integrand outside [0,1): u_te={u_te} u_tm={u_tm} at y={y}, l={l}"
            );
            match kind {
                // ln_1p keeps full relative precision when u is below
                // machine epsilon, where 1.0 - u would quantise the result
                Quantity::Energy => y * ((-u_te).ln_1p() + (-u_tm).ln_1p()),
                Quantity::Pressure => y * y * (u_te / (1.0 - u_te) + u_tm / (1.0 - u_tm)),
                Quantity::Gradient => {
                    let d_te = 1.0 - u_te;
                    let d_tm = 1.0 - u_tm;
                    y * y * y * (u_te / (d_te * d_te) + u_tm / (d_tm * d_tm))
                }
            }
        };

        let mut budget = self.cfg.quad_max_subdivisions;
        let anchor = y_l.max(1.0);
        let mut lo = y_l;
        let mut acc = 0.0f64;
        let mut err = 0.0f64;
        let mut evals = 0u64;
        let mut k = 0u32;
        loop {
            let hi = anchor + (1u64 << k) as f64;
            let abs_tol = 0.5 * self.cfg.quad_rel_tol * acc.abs();
            match integrate_adaptive(&f, lo, hi, abs_tol, self.cfg.quad_rel_tol, &mut budget) {
                Ok(q) => {
                    acc += q.integral;
                    err += q.abs_err;
                    evals += q.n_evals;
                }
                Err(q) => {
                    return Err(TermQuad {
                        integral: acc + q.integral,
                        abs_err: err + q.abs_err + tail_bound(p, hi),
                        n_evals: evals + q.n_evals,
                    });
                }
            }
            let tail = tail_bound(p, hi);
            if tail <= self.cfg.quad_rel_tol * acc.abs() || k >= 60 {
                return Ok(TermQuad {
                    integral: acc,
                    abs_err: err + tail,
                    n_evals: evals,
                });
            }
            lo = hi;
            k += 1;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn convergence(
        &self,
        reason: String,
        gap: f64,
        kind: Quantity,
        sum: f64,
        err: f64,
        n_matsubara: u32,
        n_evals: u64,
    ) -> Error {
        let (pref, sign) = self.prefactor(gap, kind);
        Error::Convergence {
            reason,
            partial: LifshitzResult {
                value: sign * pref * sum,
                est_error: pref * err,
                n_matsubara: n_matsubara.max(1),
                n_evals,
            },
        }
    }
}

/// Energy per unit area for a one-off evaluation point.
pub fn energy_per_area(
    pair: &HalfSpacePair,
    tg: &ThermalGap,
    cfg: &EngineConfig,
) -> Result<LifshitzResult> {
    LifshitzEvaluator::new(pair.clone(), tg.temperature, cfg.clone())?.energy_per_area(tg.a)
}

/// Pressure for a one-off evaluation point.
pub fn pressure(
    pair: &HalfSpacePair,
    tg: &ThermalGap,
    cfg: &EngineConfig,
) -> Result<LifshitzResult> {
    LifshitzEvaluator::new(pair.clone(), tg.temperature, cfg.clone())?.pressure(tg.a)
}

/// Pressure gradient for a one-off evaluation point.
pub fn pressure_gradient(
    pair: &HalfSpacePair,
    tg: &ThermalGap,
    cfg: &EngineConfig,
) -> Result<LifshitzResult> {
    LifshitzEvaluator::new(pair.clone(), tg.temperature, cfg.clone())?.pressure_gradient(tg.a)
}

/// Single Matsubara term for a one-off evaluation point.
pub fn matsubara_term(
    pair: &HalfSpacePair,
    tg: &ThermalGap,
    l: u32,
    cfg: &EngineConfig,
    kind: Quantity,
) -> Result<f64> {
    LifshitzEvaluator::new(pair.clone(), tg.temperature, cfg.clone())?.matsubara_term(tg.a, l, kind)
}

/// The imaginary frequency scale c/(2a) dominating the interaction at gap a.
pub fn dominant_frequency(tg: &ThermalGap) -> f64 {
    C / (2.0 * tg.a)
}
