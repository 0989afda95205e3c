//! Everything the engine knows about one configuration: plane-parallel
//! energy, pressure, and pressure gradient for Au facing Al at a 1 um gap
//! and 300 K, then the spring constant of the default re-entrant geometry.

use casimir_spring::lifshitz::{EngineConfig, HalfSpacePair, LifshitzEvaluator};
use casimir_spring::materials::builtin_material;
use casimir_spring::pfa::{
    membrane_spring_constant, spring_constant_cap_only, spring_constant_perfect_conductor,
    ReentrantGeometry,
};

fn main() -> casimir_spring::Result<()> {
    let gap = 1e-6;
    let ev = LifshitzEvaluator::new(
        HalfSpacePair::new(builtin_material("Al")?, builtin_material("Au")?),
        300.0,
        EngineConfig::default(),
    )?;

    let e = ev.energy_per_area(gap)?;
    let f = ev.pressure(gap)?;
    let g = ev.pressure_gradient(gap)?;
    println!("Au | Al at x = {gap:e} m, T = 300 K");
    println!(
        "  E/A  = {:e} J/m^2  ({} Matsubara terms, {} evals)",
        e.value, e.n_matsubara, e.n_evals
    );
    println!("  F/A  = {:e} N/m^2  (attractive)", f.value);
    println!("  F'/A = {:e} N/m^3", g.value);

    let geom = ReentrantGeometry::default();
    let spring = spring_constant_cap_only(&geom, &ev, gap)?;
    let ideal = spring_constant_perfect_conductor(&geom, gap);
    println!("re-entrant post, r0 = {:e} m:", geom.r0);
    println!("  k_C          = {:e} N/m", spring.k_c);
    println!("  k_C (ideal)  = {:e} N/m", ideal.k_c);
    let k_s = membrane_spring_constant("Au").expect("Au is tabulated");
    println!("  k_C / k_S    = {:e}  (k_S = {k_s} N/m)", spring.k_c / k_s);
    Ok(())
}
