//! Exact rational energy-time uncertainty products between hydrogen levels,
//! and a brute-force scan for the smallest product below a level cap.
//!
//! Run with: cargo run --example hydrogen_uncertainty

use rcnwave::spacetime::{uncertainty, uncertainty_minimum};

fn main() -> Result<(), rcnwave::error::Error> {
    println!("pairwise products |Delta E| |Delta T| (exact rationals):");
    for (n1, n2) in [(1u32, 2u32), (1, 3), (2, 3), (3, 4)] {
        let v = uncertainty(n1, n2)?;
        println!("  ({n1}, {n2}): {}/{} = {:.6}", v.numer(), v.denom(), {
            *v.numer() as f64 / *v.denom() as f64
        });
    }

    let m = uncertainty_minimum(50)?;
    println!(
        "\nminimum over all pairs up to n = 50: ({}, {}) with {}/{} = {:.6}",
        m.n1,
        m.n2,
        m.value.numer(),
        m.value.denom(),
        *m.value.numer() as f64 / *m.value.denom() as f64
    );
    println!("matches the claimed closed-form minimum: {}", m.matches_claimed_minimum);
    Ok(())
}
