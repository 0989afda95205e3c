//! The built-in dielectric models: Drude permittivity along the imaginary
//! frequency axis and the field penetration depth of each metal.
//!
//! The permittivity at imaginary frequency is real and > 1 for any causal
//! response; it decays from the huge low-frequency metallic values towards
//! 1 above the plasma frequency, which is what limits how well a real metal
//! mirrors high Matsubara terms.

use casimir_spring::constants::ev_to_angular_frequency;
use casimir_spring::materials::{builtin_material, BUILTIN_DRUDE_EV};

fn main() -> casimir_spring::Result<()> {
    println!("penetration depth delta = c / Omega:");
    for (name, omega_ev, gamma_ev) in BUILTIN_DRUDE_EV {
        let m = builtin_material(name)?;
        println!(
            "  {name:<3} Omega = {omega_ev:>4} eV, gamma = {gamma_ev:>5} eV, delta = {:.3} nm",
            m.penetration_depth()? * 1e9
        );
    }

    println!("\npermittivity eps(i xi), xi in eV:");
    let grid_ev = [0.01, 0.1, 1.0, 5.0, 9.0, 20.0, 100.0];
    print!("  {:>8}", "xi_eV");
    for (name, ..) in BUILTIN_DRUDE_EV {
        print!("  {name:>12}");
    }
    println!();
    for xi_ev in grid_ev {
        let xi = ev_to_angular_frequency(xi_ev)?;
        print!("  {xi_ev:>8}");
        for (name, ..) in BUILTIN_DRUDE_EV {
            print!("  {:>12.4e}", builtin_material(name)?.permittivity(xi)?);
        }
        println!();
    }
    Ok(())
}
