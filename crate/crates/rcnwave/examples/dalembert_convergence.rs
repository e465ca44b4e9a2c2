//! Second-order convergence of the conservative leapfrog scheme against the
//! d'Alembert solution on a flat window, plus the conserved discrete energy.
//!
//! Run with: cargo run --example dalembert_convergence

use rcnwave::potential::RadialPotential;
use rcnwave::wave::{energy_drift, run_wave, Coupling, Pulse, WaveScenario};

fn error_at(cells: usize) -> Result<f64, rcnwave::error::Error> {
    let p = RadialPotential::minkowski(1);
    let sc = WaveScenario::new(
        p,
        0.1,
        20.1,
        Coupling::None,
        cells,
        0.5,
        4.0,
        Pulse::new(10.0, 1.0),
    )?;
    let out = run_wave(&sc)?;
    // With zero initial velocity the solution splits into two half pulses.
    let pulse = Pulse::new(10.0, 1.0);
    let mut err = 0.0f64;
    for (i, &tau) in out.grid.taus.iter().enumerate() {
        let exact = 0.5 * (pulse.eval(tau - 4.0) + pulse.eval(tau + 4.0));
        err = err.max((out.u[i] - exact).abs());
    }
    println!(
        "  {cells:>5} cells: max error = {err:.3e}, energy drift = {:.3e}",
        energy_drift(&out)
    );
    Ok(err)
}

fn main() -> Result<(), rcnwave::error::Error> {
    println!("travelling pulse vs d'Alembert:");
    let e1 = error_at(200)?;
    let e2 = error_at(400)?;
    let e4 = error_at(800)?;
    println!("observed orders: {:.2}, {:.2}", (e1 / e2).log2(), (e2 / e4).log2());
    Ok(())
}
