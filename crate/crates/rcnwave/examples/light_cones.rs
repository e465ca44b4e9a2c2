//! Inner-time light cones: the past and future rays through an emission
//! event, in geometries where tau has a closed form.
//!
//! Run with: cargo run --example light_cones

use rcnwave::spacetime::{light_cone, spacetime_tau, SpacetimeModel};

fn print_cone(name: &str, model: &SpacetimeModel, r0: f64, radii: &[f64]) {
    println!("{name}, emitted at r = {r0}, t = 0:");
    println!("{:>10} {:>14} {:>14}", "r", "t_past", "t_future");
    let cone = light_cone(model, 0.0, r0).unwrap();
    for &r in radii {
        let tau = spacetime_tau(model, r).unwrap();
        let dt = (tau - cone.tau0).abs();
        println!("{r:>10.4} {:>14.6} {:>14.6}", -dt, dt);
    }
}

fn main() {
    print_cone(
        "Schwarzschild m=1",
        &SpacetimeModel::Schwarzschild { m: 1.0, c: 1.0 },
        3.0,
        &[2.1, 2.5, 3.0, 4.0, 6.0],
    );
    // The cosmological horizon is infinitely far in inner time: t_future
    // diverges as r -> ell.
    print_cone(
        "de Sitter ell=1",
        &SpacetimeModel::DeSitter { ell: 1.0 },
        0.5,
        &[0.1, 0.5, 0.9, 0.99, 0.999],
    );
    print_cone(
        "Reissner-Nordstrom m=1, e=1.2 (naked)",
        &SpacetimeModel::ReissnerNordstrom { m: 1.0, e: 1.2 },
        1.0,
        &[0.25, 0.5, 1.0, 2.0, 4.0],
    );
}
