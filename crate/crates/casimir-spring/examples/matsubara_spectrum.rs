//! How the thermal sum is built: individual Matsubara contributions to the
//! Casimir pressure for Au | Al at 1 um and 300 K.
//!
//! At this gap and temperature about a fifth of the pressure comes from
//! the static l = 0 term; the rest decays geometrically because each
//! integrand falls off as exp(-2 a xi_l / c). The engine truncates the sum
//! once three consecutive terms are negligible.

use casimir_spring::constants::matsubara_frequency;
use casimir_spring::lifshitz::{
    dominant_frequency, EngineConfig, HalfSpacePair, LifshitzEvaluator, Quantity, ThermalGap,
};
use casimir_spring::materials::builtin_material;

fn main() -> casimir_spring::Result<()> {
    let gap = 1e-6;
    let temperature = 300.0;
    let ev = LifshitzEvaluator::new(
        HalfSpacePair::new(builtin_material("Al")?, builtin_material("Au")?),
        temperature,
        EngineConfig::default(),
    )?;
    let total = ev.pressure(gap)?;

    println!(
        "Au | Al, x = {gap:e} m, T = {temperature} K: {} terms, F/A = {:e} N/m^2",
        total.n_matsubara, total.value
    );
    println!(
        "characteristic cavity frequency c/2x = {:.3e} rad/s",
        dominant_frequency(&ThermalGap::new(gap, temperature)?)
    );
    println!(
        "{:>4} {:>12} {:>14} {:>10}",
        "l", "xi_l_rad_s", "term_N_m2", "cum_frac"
    );
    let mut cumulative = 0.0;
    for l in 0..total.n_matsubara {
        let term = ev.matsubara_term(gap, l, Quantity::Pressure)?;
        cumulative += term;
        println!(
            "{l:>4} {:>12.3e} {:>14.5e} {:>10.6}",
            matsubara_frequency(l, temperature)?,
            term,
            cumulative / total.value
        );
    }
    Ok(())
}
