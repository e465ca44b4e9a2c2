//! The near-horizon silo: a pulse launched close to the Schwarzschild
//! horizon propagates at exactly unit speed in inner time, so after time t
//! nothing at all has reached tau-distance > t from its support.
//!
//! Run with: cargo run --example horizon_silo

use rcnwave::potential::RadialPotential;
use rcnwave::wave::{run_wave, verify_cone, ConeSpec, Coupling, Pulse, WaveScenario};

fn main() -> Result<(), rcnwave::error::Error> {
    let p = RadialPotential::schwarzschild(1.0, 1.0)?;
    // Excise a slab reaching tau-depth 40 inward from r = 6; the pulse sits
    // at tau in [5, 7] measured from the excision edge.
    let sc = WaveScenario::black_hole_slab(
        p,
        6.0,
        40.0,
        Coupling::AttractiveQ,
        2000,
        1.0,
        20.0,
        Pulse::new(6.0, 1.0),
    )?;
    println!(
        "slab radii: [{:.12}, {}] (inner edge {:.3e} above the horizon)",
        sc.r_lo,
        sc.r_hi,
        sc.r_lo - 2.0
    );
    let out = run_wave(&sc)?;
    let cone = verify_cone(
        &sc,
        &out,
        &ConeSpec { speed: 1.0, pad_cells: 2, check_lower: true, check_upper: true },
    );
    println!("t = 20: support must stay inside tau in [{:.2}, {:.2}]", cone.cone_lo, cone.cone_hi);
    println!(
        "largest |u| outside the cone: {:.3e} (peak {:.3})",
        cone.max_outside, cone.peak_initial
    );
    println!("silo holds: {}", cone.relative_leak <= 1e-8);
    Ok(())
}
