//! Weighted Hardy quotients: fixed test profiles, the log-sine family that
//! saturates the sharp constant, and the self-adjointness threshold.
//!
//! Run with: cargo run --example hardy_sharpness

use rcnwave::forms::{hardy_ratio, self_adjointness_feasible, ProfileShape, TestProfile};

fn main() -> Result<(), rcnwave::error::Error> {
    // In dimension 1 the sharp constant of int phi^2/r^2 <= C int phi'^2 is
    // C = 4; a polynomial bump sits well below it.
    let bump = TestProfile::new(ProfileShape::PolynomialBump, 0.0, 1.0)?;
    println!("dimension 1, sharp constant 4:");
    println!("  polynomial bump quotient: {:.6}", hardy_ratio(&bump, 1)?);

    // Log-sine profiles r^s sin(pi log(r/r_in)/L) approach the constant as
    // the logarithmic length L grows.
    for big_l in [5.0, 10.0, 20.0, 40.0] {
        let prof = TestProfile::new(
            ProfileShape::LogSine { s: 0.5 },
            (-big_l as f64).exp(),
            1.0,
        )?;
        println!("  log-sine L = {big_l:>4}: quotient = {:.6}", hardy_ratio(&prof, 1)?);
    }

    // Dimension n shifts the sharp constant to 4/(n-2)^2; self-adjointness
    // of the singular operator needs (n-2)^2/4 >= 1 + alpha.
    println!("\nself-adjointness of the alpha-singular operator:");
    for (n, alpha) in [(3u32, 0.0), (4, 0.0), (5, 1.25), (5, 1.26), (7, 5.25)] {
        let rep = self_adjointness_feasible(n, alpha)?;
        println!(
            "  n = {n}, alpha = {alpha:>5}: threshold {:.2} vs required {:.2} -> {}",
            rep.threshold,
            rep.required,
            if rep.feasible { "feasible" } else { "infeasible" }
        );
    }
    Ok(())
}
