//! Static Dirichlet solve of the stationary operator on a singular window,
//! with the pivot test that detects an indefinite form.
//!
//! Run with: cargo run --example dirichlet_solve

use rcnwave::potential::RadialPotential;
use rcnwave::wave::{solve_dirichlet, Coupling, Pulse, WaveScenario};

fn main() -> Result<(), rcnwave::error::Error> {
    let p = RadialPotential::power_singular(1.0, 0.1, 3)?;
    let sc = WaveScenario::new(
        p,
        0.05,
        1.0,
        Coupling::AttractiveQ,
        256,
        0.5,
        1.0,
        Pulse::new(0.5, 0.1),
    )?;
    let (grid, u) = solve_dirichlet(&sc, |tau| (std::f64::consts::PI * tau / 5.0).sin())?;
    println!("{:>10} {:>12} {:>14}", "r", "tau", "u");
    for i in (0..u.len()).step_by(u.len() / 12) {
        println!("{:>10.4} {:>12.6} {:>14.6e}", grid.rs[i], grid.taus[i], u[i]);
    }

    // A supercritical coupling makes the form indefinite: the solver must
    // refuse rather than return a spurious solution.
    let p = RadialPotential::power_singular(1.0, 5.0, 1)?;
    let sc = WaveScenario::new(p, 0.01, 0.2, Coupling::AttractiveQ, 64, 0.5, 1.0, Pulse::new(0.001, 0.0005))?;
    match solve_dirichlet(&sc, |_| 1.0) {
        Err(e) => println!("\nsupercritical coupling rejected: {e}"),
        Ok(_) => println!("\nunexpected: supercritical solve succeeded"),
    }
    Ok(())
}
