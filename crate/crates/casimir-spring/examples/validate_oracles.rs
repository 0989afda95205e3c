//! The built-in cross-check: engine results against a deliberately slow
//! brute-force quadrature of the same formula, plus finite-difference
//! consistency of the force and gradient against the energy.
//!
//! The brute-force reference shares no quadrature, truncation, or
//! convergence code with the engine, so agreement to a few parts in 1e8 is
//! strong evidence both are computing the same physics.

use casimir_spring::validate::{default_validation_points, validate_engine};

fn main() {
    let points = default_validation_points();
    let report = validate_engine(&points, 1e-6);
    println!(
        "{} points, tolerance {:e}:",
        report.points.len(),
        report.tolerance
    );
    for p in &report.points {
        println!(
            "  x = {:e} m ({} | {}): energy {:.3e}, pressure {:.3e}, gradient {:.3e}",
            p.gap_m, p.side_1, p.side_2, p.energy_dev, p.pressure_dev, p.gradient_dev
        );
    }
    println!(
        "max deviation {:.3e}: {}",
        report.max_deviation,
        if report.pass { "PASS" } else { "FAIL" }
    );
    std::process::exit(if report.pass { 0 } else { 2 });
}
