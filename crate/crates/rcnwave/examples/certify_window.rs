//! Range-control certification of a singular window: the two sampled
//! suprema, the constant search, and the contraction constant delta.
//!
//! Run with: cargo run --example certify_window

use rcnwave::potential::RadialPotential;
use rcnwave::rcn::{certify_window, necessary_product, AnchorEdge, RcnWindow, SearchConfig};

fn report(beta: f64) -> Result<(), rcnwave::error::Error> {
    let p = RadialPotential::power_singular(1.0, beta, 3)?;
    let w = RcnWindow::new(p.clone(), 0.0, 1.0, AnchorEdge::Lower)?;
    let cfg = SearchConfig::default();
    let cert = certify_window(&w, &cfg)?;
    let nec = necessary_product(&w, &cfg)?;
    println!("beta = {beta}:");
    println!("  sup dual potential   = {:.6}", cert.samples.sup_dual);
    println!("  sup q tau            = {:.6}", cert.samples.sup_qtau);
    println!("  pointwise product    = {:.6} (must stay below 1/16 = 0.0625)", nec.sup_product);
    if cert.feasible {
        println!(
            "  feasible: A = {:.4}, C0 = {:.4}, eps0 = {:.4}, delta = {:.6}",
            cert.a, cert.c0, cert.eps0, cert.delta
        );
    } else {
        println!("  infeasible (necessary product satisfied: {})", nec.satisfied);
    }
    Ok(())
}

fn main() -> Result<(), rcnwave::error::Error> {
    // Small coupling certifies; doubling it crosses the necessary bound.
    report(0.1)?;
    report(0.2)?;
    Ok(())
}
