//! Inner-time charts for the closed-form geometries, checked against direct
//! quadrature of dtau/dr.
//!
//! Run with: cargo run --example inner_time_charts

use rcnwave::geometry::tau_of_r;
use rcnwave::potential::RadialPotential;
use rcnwave::spacetime::{spacetime_tau, SpacetimeModel};

fn main() -> Result<(), rcnwave::error::Error> {
    // Schwarzschild, m = 1: tau runs to -infinity at the horizon r = 2.
    let schw = RadialPotential::schwarzschild(1.0, 1.0)?;
    let model = SpacetimeModel::Schwarzschild { m: 1.0, c: 1.0 };
    println!("Schwarzschild m=1 (anchored at r = 3):");
    println!("{:>10} {:>22} {:>22}", "r", "closed form", "quadrature");
    for r in [2.05, 2.5, 3.0, 4.0, 6.0, 10.0] {
        let exact = spacetime_tau(&model, r)?;
        let quad = tau_of_r(&schw, 3.0, r)? + spacetime_tau(&model, 3.0)?;
        println!("{r:>10.3} {exact:>22.15} {quad:>22.15}");
    }

    // de Sitter, ell = 1: tau runs to +infinity at the cosmological horizon.
    let model = SpacetimeModel::DeSitter { ell: 1.0 };
    println!("\nde Sitter ell=1 (anchored at the origin):");
    for r in [0.1, 0.5, 0.9, 0.99, 0.999] {
        println!("{r:>10.3} {:>22.15}", spacetime_tau(&model, r)?);
    }

    // Power-law singular weight: tau = r^(alpha+1) / (beta (alpha+1)).
    let p = RadialPotential::power_singular(1.0, 0.1, 3)?;
    println!("\npower weight alpha=1, beta=0.1 (tau = 5 r^2):");
    for r in [0.1, 0.5, 1.0] {
        println!("{r:>10.3} {:>22.15}", tau_of_r(&p, 0.0, r)?);
    }
    Ok(())
}
