//! Two sanity limits of the engine against the ideal-mirror closed form
//! k_pc = pi^3 hbar c r0^2 / (60 x^5).
//!
//! First, the built-in PC material evaluated through the full machinery
//! must land on the closed form. Second, a fictitious Drude metal
//! approaches that limit from below as its plasma frequency grows, since a
//! stiffer electron gas reflects more of the relevant frequencies.

use casimir_spring::lifshitz::{EngineConfig, HalfSpacePair, LifshitzEvaluator};
use casimir_spring::materials::{builtin_material, MaterialModel};
use casimir_spring::pfa::{
    spring_constant_cap_only, spring_constant_perfect_conductor, ReentrantGeometry,
};

fn main() -> casimir_spring::Result<()> {
    let geom = ReentrantGeometry::default();
    let gap = 0.1e-6; // small gap: thermal corrections to the ideal law are tiny
    let ideal = spring_constant_perfect_conductor(&geom, gap).k_c;

    let pc = LifshitzEvaluator::new(
        HalfSpacePair::symmetric(builtin_material("PC")?),
        300.0,
        EngineConfig::default(),
    )?;
    let through_engine = spring_constant_cap_only(&geom, &pc, gap)?.k_c;
    println!("x = {gap:e} m:");
    println!("  closed form        k_pc = {ideal:e} N/m");
    println!(
        "  engine, PC mirrors k_C  = {through_engine:e} N/m (rel dev {:.2e})",
        (through_engine / ideal - 1.0).abs()
    );

    println!("\nDrude metal approaching the mirror limit (gamma = 0.02 eV):");
    for omega_ev in [5.0, 10.0, 20.0, 50.0, 100.0, 400.0] {
        let metal = MaterialModel::drude_ev("stiff", omega_ev, 0.02)?;
        let ev = LifshitzEvaluator::new(
            HalfSpacePair::symmetric(metal),
            300.0,
            EngineConfig::default(),
        )?;
        let k = spring_constant_cap_only(&geom, &ev, gap)?.k_c;
        println!("  Omega = {omega_ev:>5} eV: k_C / k_pc = {:.6}", k / ideal);
    }
    Ok(())
}
