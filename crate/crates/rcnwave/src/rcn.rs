//! Relative-compactness / window certification.
//!
//! A window `[r_lo, r_hi]` of a radial weight is *certified* when constants
//! `A in (0,1)`, `delta_0 > 0`, `C_0 > 0`, `eps_0 > 0` exist with
//!
//! ```text
//! 4 (1/C_0^2 + eps_0^2) D^2 < 1 - A - delta_0
//! 4 (C_0^2 + 1/eps_0^2) Q^2 < A - delta_0
//! ```
//!
//! where `D` is the sup of the dual potential over the window and `Q` the sup
//! of `q tau`, both measured with tau anchored at the window edge that points
//! away from any horizon.  The two conditions admit a joint solution exactly
//! when `D Q` is small (the product must stay below 1/16 in the limit), so a
//! pointwise necessary check is reported alongside the grid search.
//!
//! Windows abutting an infinite-tau endpoint (a horizon) are truncated at a
//! fixed tau depth before sampling: tau diverges there, so no finite window
//! up to the horizon itself can be certified, but every bounded-tau slab can
//! be examined honestly.

use crate::error::Error;
use crate::geometry::{dual_potential_at, tau_of_r};
use crate::potential::{EndpointKind, RadialPotential};
use serde::Serialize;

/// Tunables for the certification grid search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    /// Chebyshev-Lobatto sample count per window.
    pub samples: usize,
    /// Safety factor applied to sampled sups before the search.
    pub sup_inflation: f64,
    /// Uniform grid points for A in (0, 1).
    pub a_points: usize,
    /// Log-spaced grid points for delta_0 in [delta0_min, delta0_max].
    pub delta0_points: usize,
    pub delta0_min: f64,
    pub delta0_max: f64,
    /// Log-spaced grid points for each of C_0 and eps_0 in [c_eps_min, c_eps_max].
    pub c_eps_points: usize,
    pub c_eps_min: f64,
    pub c_eps_max: f64,
    /// tau depth at which a window touching an infinite-tau endpoint is
    /// truncated before sampling.
    pub horizon_tau_depth: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 257,
            sup_inflation: 1.05,
            a_points: 64,
            delta0_points: 16,
            delta0_min: 1e-3,
            delta0_max: 0.2,
            c_eps_points: 96,
            c_eps_min: 1e-4,
            c_eps_max: 1e4,
            horizon_tau_depth: 8.0,
        }
    }
}

/// Which edge of the window carries the tau anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnchorEdge {
    Lower,
    Upper,
}

/// A certification window over a radial weight.
#[derive(Debug, Clone)]
pub struct RcnWindow {
    potential: RadialPotential,
    r_lo: f64,
    r_hi: f64,
    anchor: AnchorEdge,
}

impl RcnWindow {
    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    pub fn r_hi(&self) -> f64 {
        self.r_hi
    }
}

/// Sampled geometry of a window after anchoring and horizon truncation.
#[derive(Debug, Clone, Serialize)]
pub struct WindowSamples {
    /// Effective (possibly truncated) window actually sampled.
    pub r_lo: f64,
    pub r_hi: f64,
    /// The anchor edge after the away-from-horizon adjustment.
    pub anchor: AnchorEdge,
    pub r_anchor: f64,
    /// Whether horizon-side truncation was applied.
    pub truncated: bool,
    /// Sup of the dual potential over the samples (uninflated).
    pub sup_dual: f64,
    /// Sup of `q tau` over the samples (uninflated).
    pub sup_qtau: f64,
    /// Pointwise sup of the product `dual * q tau`.
    pub sup_product: f64,
}

impl RcnWindow {
    /// A window with the tau anchor on a chosen edge.  If that edge sits on
    /// an infinite-tau endpoint of the weight's domain, the anchor flips to
    /// the opposite edge (tau must vanish somewhere finite).
    pub fn new(
        potential: RadialPotential,
        r_lo: f64,
        r_hi: f64,
        anchor: AnchorEdge,
    ) -> Result<Self, Error> {
        if !(r_lo < r_hi) {
            return Err(Error::InvalidParameter(format!(
                "window needs r_lo < r_hi, got [{r_lo}, {r_hi}]"
            )));
        }
        let (dom_lo, dom_hi) = potential.domain();
        if r_lo < dom_lo || r_hi > dom_hi {
            return Err(Error::OutOfDomain { what: "window", value: r_lo, lo: dom_lo, hi: dom_hi });
        }
        let lo_infinite = r_lo == dom_lo && potential.inner_end() == EndpointKind::InfiniteTau;
        let hi_infinite = r_hi == dom_hi && potential.outer_end() == EndpointKind::InfiniteTau;
        if lo_infinite && hi_infinite {
            return Err(Error::InvalidParameter(
                "window touches infinite-tau endpoints on both sides".into(),
            ));
        }
        let anchor = if lo_infinite {
            AnchorEdge::Upper
        } else if hi_infinite {
            AnchorEdge::Lower
        } else {
            anchor
        };
        Ok(Self { potential, r_lo, r_hi, anchor })
    }

    /// Dyadic layers hugging the inner domain edge `r_h` (a horizon or a
    /// singular center): layer k is `[r_h + 2^{-k}, r_h + 2^{-k+1}]`, each
    /// anchored at its outer edge.
    pub fn dyadic_layers(
        potential: &RadialPotential,
        k_lo: u32,
        k_hi: u32,
    ) -> Result<Vec<RcnWindow>, Error> {
        if k_lo == 0 || k_hi < k_lo {
            return Err(Error::InvalidParameter(format!(
                "dyadic layers need 1 <= k_lo <= k_hi, got ({k_lo}, {k_hi})"
            )));
        }
        let r_h = potential.domain().0;
        (k_lo..=k_hi)
            .map(|k| {
                let lo = r_h + 2f64.powi(-(k as i32));
                let hi = r_h + 2f64.powi(-(k as i32) + 1);
                RcnWindow::new(potential.clone(), lo, hi, AnchorEdge::Upper)
            })
            .collect()
    }

    pub fn potential(&self) -> &RadialPotential {
        &self.potential
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.r_lo, self.r_hi)
    }

    pub fn anchor(&self) -> AnchorEdge {
        self.anchor
    }

    /// Radius at tau-distance `depth` from `from_r`, moving toward the
    /// infinite-tau edge at `edge` (used for horizon truncation).
    fn radius_at_tau_depth(&self, from_r: f64, edge: f64, depth: f64) -> Result<f64, Error> {
        let p = &self.potential;
        // March geometrically toward the edge until the accumulated tau
        // exceeds the target depth, then bisect inside the last segment.
        let mut r_prev = from_r;
        let mut acc = 0.0f64;
        let mut frac = 0.5f64;
        let (mut lo, mut hi);
        loop {
            let r_next = edge + (from_r - edge) * frac;
            let seg = tau_of_r(p, r_prev, r_next)?.abs();
            if acc + seg >= depth {
                lo = r_next.min(r_prev);
                hi = r_next.max(r_prev);
                break;
            }
            acc += seg;
            r_prev = r_next;
            frac *= 0.5;
            if (r_prev - edge).abs() <= 1e3 * f64::EPSILON * from_r.abs().max(1.0) {
                // tau grows without bound at the edge; representable radii
                // ran out first, so stop at the last one reached.
                return Ok(r_prev);
            }
        }
        // Bisection: find r in [lo, hi] with acc + |tau(r_prev -> r)| = depth.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let here = acc + tau_of_r(p, r_prev, mid)?.abs();
            // The edge side of the bracket has deeper tau.
            let deeper_is_lo = edge < from_r;
            if (here < depth) == deeper_is_lo {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs().max(1e-300) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Sample the window on Chebyshev-Lobatto nodes and record the sups that
    /// drive certification.
    pub fn sample(&self, cfg: &SearchConfig) -> Result<WindowSamples, Error> {
        let p = &self.potential;
        let (dom_lo, dom_hi) = p.domain();
        let (mut a, mut b) = (self.r_lo, self.r_hi);
        let mut truncated = false;
        // Truncate the side that touches an infinite-tau endpoint at the
        // configured tau depth, measured from the anchor edge.
        if a == dom_lo && p.inner_end() == EndpointKind::InfiniteTau {
            a = self.radius_at_tau_depth(b, dom_lo, cfg.horizon_tau_depth)?;
            truncated = true;
        }
        if b == dom_hi && p.outer_end() == EndpointKind::InfiniteTau {
            b = self.radius_at_tau_depth(a, dom_hi, cfg.horizon_tau_depth)?;
            truncated = true;
        }
        let r_anchor = match self.anchor {
            AnchorEdge::Lower => a,
            AnchorEdge::Upper => b,
        };
        let m = cfg.samples.max(3);
        // Lobatto nodes, ascending in r.
        let mut nodes: Vec<f64> = (0..m)
            .map(|j| {
                let c = (std::f64::consts::PI * j as f64 / (m - 1) as f64).cos();
                0.5 * (a + b) - 0.5 * (b - a) * c
            })
            .collect();
        nodes[0] = a;
        nodes[m - 1] = b;
        // Cumulative signed tau from the anchor along the node chain.
        let mut taus = vec![0.0f64; m];
        match self.anchor {
            AnchorEdge::Lower => {
                let mut t = 0.0;
                for i in 1..m {
                    t += tau_of_r(p, nodes[i - 1], nodes[i])?;
                    taus[i] = t;
                }
            }
            AnchorEdge::Upper => {
                let mut t = 0.0;
                for i in (0..m - 1).rev() {
                    t += tau_of_r(p, nodes[i + 1], nodes[i])?;
                    taus[i] = t;
                }
            }
        }
        let mut sup_dual = 0.0f64;
        let mut sup_qtau = 0.0f64;
        let mut sup_product = 0.0f64;
        for i in 0..m {
            if taus[i] == 0.0 {
                // The anchor node itself: q tau = 0 and the dual potential is
                // a removable limit, covered by the adjacent nodes.
                continue;
            }
            let dual = dual_potential_at(p, r_anchor, nodes[i], taus[i])?;
            let qtau = p.q(nodes[i]) * taus[i].abs();
            sup_dual = sup_dual.max(dual);
            sup_qtau = sup_qtau.max(qtau);
            sup_product = sup_product.max(dual * qtau);
        }
        Ok(WindowSamples {
            r_lo: a,
            r_hi: b,
            anchor: self.anchor,
            r_anchor,
            truncated,
            sup_dual,
            sup_qtau,
            sup_product,
        })
    }
}

/// The contraction constant `delta = (A - delta_0)/(A + delta_0)` implied by
/// a feasible pair.
pub fn delta_bound(a: f64, delta0: f64) -> f64 {
    (a - delta0) / (a + delta0)
}

/// Outcome of the constant search for one window.
#[derive(Debug, Clone, Serialize)]
pub struct RcnCertificate {
    pub feasible: bool,
    pub samples: WindowSamples,
    /// Inflated sups actually used by the search.
    pub d_used: f64,
    pub q_used: f64,
    pub a: f64,
    pub delta0: f64,
    pub c0: f64,
    pub eps0: f64,
    /// min of the two condition slacks at the chosen constants (negative
    /// when infeasible: the least-bad corner found).
    pub margin: f64,
    /// Contraction constant at the chosen (A, delta_0).
    pub delta: f64,
}

/// `(X, Y)` for a `(C_0, eps_0)` pair: the two left-hand sides divided by
/// `D^2` and `Q^2` are `4 (1/C_0^2 + eps_0^2)` and `4 (C_0^2 + 1/eps_0^2)`.
fn pair_table(cfg: &SearchConfig, d: f64, q: f64) -> Vec<(f64, f64, f64, f64)> {
    let k = cfg.c_eps_points;
    let grid: Vec<f64> = (0..k)
        .map(|i| {
            let t = i as f64 / (k - 1) as f64;
            cfg.c_eps_min * (cfg.c_eps_max / cfg.c_eps_min).powf(t)
        })
        .collect();
    let mut out = Vec::with_capacity(k * k);
    for &c0 in &grid {
        for &e0 in &grid {
            let x = 4.0 * (1.0 / (c0 * c0) + e0 * e0) * d * d;
            let y = 4.0 * (c0 * c0 + 1.0 / (e0 * e0)) * q * q;
            out.push((x, y, c0, e0));
        }
    }
    out
}

/// Pareto frontier of `(X, Y)` pairs: keep only pairs not dominated in both
/// coordinates, so the (A, delta_0) scan touches a short list.
fn pareto(mut pairs: Vec<(f64, f64, f64, f64)>) -> Vec<(f64, f64, f64, f64)> {
    pairs.sort_by(|p, r| p.0.total_cmp(&r.0).then(p.1.total_cmp(&r.1)));
    let mut front: Vec<(f64, f64, f64, f64)> = Vec::new();
    for p in pairs {
        if front.last().map_or(true, |l| p.1 < l.1) {
            front.push(p);
        }
    }
    front
}

fn a_delta_grid(cfg: &SearchConfig) -> (Vec<f64>, Vec<f64>) {
    let a_grid: Vec<f64> = (1..=cfg.a_points)
        .map(|i| i as f64 / (cfg.a_points + 1) as f64)
        .collect();
    let d_grid: Vec<f64> = (0..cfg.delta0_points)
        .map(|i| {
            let t = i as f64 / (cfg.delta0_points - 1) as f64;
            cfg.delta0_min * (cfg.delta0_max / cfg.delta0_min).powf(t)
        })
        .collect();
    (a_grid, d_grid)
}

/// Best margin over the frontier for fixed (A, delta_0); returns the pair
/// achieving it.
fn best_pair(front: &[(f64, f64, f64, f64)], a: f64, delta0: f64) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &(x, y, c0, e0) in front {
        let m = (1.0 - a - delta0 - x).min(a - delta0 - y);
        if m > best.0 {
            best = (m, c0, e0);
        }
    }
    best
}

/// Grid search for certification constants on one window.
pub fn certify_window(window: &RcnWindow, cfg: &SearchConfig) -> Result<RcnCertificate, Error> {
    let samples = window.sample(cfg)?;
    let d = samples.sup_dual * cfg.sup_inflation;
    let q = samples.sup_qtau * cfg.sup_inflation;
    let front = pareto(pair_table(cfg, d, q));
    let (a_grid, d_grid) = a_delta_grid(cfg);
    // Maximize the worst slack; among near-ties prefer the larger
    // contraction bound delta (smallest delta_0 relative to A).
    let mut best: Option<(f64, f64, f64, f64, f64)> = None; // (margin, a, delta0, c0, eps0)
    for &a in &a_grid {
        for &delta0 in &d_grid {
            let (m, c0, e0) = best_pair(&front, a, delta0);
            let better = match best {
                None => true,
                Some((bm, ba, bd0, ..)) => {
                    m > bm + 1e-12
                        || ((m - bm).abs() <= 1e-12
                            && delta_bound(a, delta0) > delta_bound(ba, bd0))
                }
            };
            if better {
                best = Some((m, a, delta0, c0, e0));
            }
        }
    }
    let (margin, a, delta0, c0, eps0) = best.expect("grids are nonempty");
    Ok(RcnCertificate {
        feasible: margin > 0.0,
        samples,
        d_used: d,
        q_used: q,
        a,
        delta0,
        c0,
        eps0,
        margin,
        delta: delta_bound(a, delta0),
    })
}

/// Pointwise necessary condition: if any point of the window already has
/// `dual * q tau >= 1/16`, no constants can exist.
#[derive(Debug, Clone, Serialize)]
pub struct NecessaryProduct {
    pub sup_product: f64,
    pub threshold: f64,
    pub satisfied: bool,
}

pub fn necessary_product(window: &RcnWindow, cfg: &SearchConfig) -> Result<NecessaryProduct, Error> {
    let s = window.sample(cfg)?;
    Ok(NecessaryProduct {
        sup_product: s.sup_product,
        threshold: 1.0 / 16.0,
        satisfied: s.sup_product < 1.0 / 16.0,
    })
}

/// Per-window outcome inside a pinned-constants sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepWindowOutcome {
    pub r_lo: f64,
    pub r_hi: f64,
    pub sup_dual: f64,
    pub sup_qtau: f64,
    pub c0: f64,
    pub eps0: f64,
    pub margin: f64,
}

/// Result of certifying a family of windows with a single shared pair
/// `(A, delta_0)` (each window still picks its own `(C_0, eps_0)`).
#[derive(Debug, Clone, Serialize)]
pub struct UniformSweep {
    pub ok: bool,
    pub a: f64,
    pub delta0: f64,
    pub delta: f64,
    /// Worst margin across windows at the chosen constants.
    pub min_margin: f64,
    pub windows: Vec<SweepWindowOutcome>,
}

/// Search for one `(A, delta_0)` that certifies every window in the family.
pub fn uniform_delta_sweep(
    windows: &[RcnWindow],
    cfg: &SearchConfig,
) -> Result<UniformSweep, Error> {
    if windows.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one window".into()));
    }
    let mut fronts = Vec::with_capacity(windows.len());
    let mut sampled = Vec::with_capacity(windows.len());
    for w in windows {
        let s = w.sample(cfg)?;
        let d = s.sup_dual * cfg.sup_inflation;
        let q = s.sup_qtau * cfg.sup_inflation;
        fronts.push(pareto(pair_table(cfg, d, q)));
        sampled.push(s);
    }
    let (a_grid, d_grid) = a_delta_grid(cfg);
    let mut best: Option<(f64, f64, f64)> = None; // (min_margin, a, delta0)
    for &a in &a_grid {
        for &delta0 in &d_grid {
            let mut worst = f64::INFINITY;
            for front in &fronts {
                let (m, _, _) = best_pair(front, a, delta0);
                worst = worst.min(m);
                if worst == f64::NEG_INFINITY {
                    break;
                }
            }
            let better = match best {
                None => true,
                Some((bm, ba, bd0)) => {
                    worst > bm + 1e-12
                        || ((worst - bm).abs() <= 1e-12
                            && delta_bound(a, delta0) > delta_bound(ba, bd0))
                }
            };
            if better {
                best = Some((worst, a, delta0));
            }
        }
    }
    let (min_margin, a, delta0) = best.expect("grids are nonempty");
    let outcomes = sampled
        .iter()
        .zip(&fronts)
        .map(|(s, front)| {
            let (m, c0, e0) = best_pair(front, a, delta0);
            SweepWindowOutcome {
                r_lo: s.r_lo,
                r_hi: s.r_hi,
                sup_dual: s.sup_dual,
                sup_qtau: s.sup_qtau,
                c0,
                eps0: e0,
                margin: m,
            }
        })
        .collect();
    Ok(UniformSweep {
        ok: min_margin > 0.0,
        a,
        delta0,
        delta: delta_bound(a, delta0),
        min_margin,
        windows: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SearchConfig {
        SearchConfig { samples: 129, ..SearchConfig::default() }
    }

    #[test]
    fn power_law_window_certifies_for_small_beta() {
        // q = beta^2 / r^2 on (0, 1], anchored at the singular center where
        // tau vanishes.  Sups: dual = n/4 exactly, q tau = beta/2; with
        // beta = 0.1, n = 3 the product is well under 1/16.
        let p = RadialPotential::power_singular(1.0, 0.1, 3).unwrap();
        let w = RcnWindow::new(p, 0.0, 1.0, AnchorEdge::Lower).unwrap();
        let cert = certify_window(&w, &cfg()).unwrap();
        assert!(cert.feasible, "margin {}", cert.margin);
        assert!((cert.samples.sup_dual - 0.75).abs() < 1e-6);
        assert!((cert.samples.sup_qtau - 0.05).abs() < 1e-6);
        assert!(cert.delta > 0.0 && cert.delta < 1.0);
    }

    #[test]
    fn power_law_window_fails_for_large_beta() {
        // Feasibility needs beta^2 < 1/(4 n^2); at n = 3 the cutoff is
        // beta = 1/6, so beta = 0.2 must fail while the sups stay finite.
        let p = RadialPotential::power_singular(1.0, 0.2, 3).unwrap();
        let w = RcnWindow::new(p, 0.0, 1.0, AnchorEdge::Lower).unwrap();
        let cert = certify_window(&w, &cfg()).unwrap();
        assert!(!cert.feasible, "margin {}", cert.margin);
        let necessary = necessary_product(&w, &cfg()).unwrap();
        assert!(!necessary.satisfied, "sup product {}", necessary.sup_product);
    }

    #[test]
    fn necessary_product_matches_closed_form() {
        // dual = n/4, q tau = beta/2 r^0 -> product = n beta / 8 at every
        // radius for alpha = 1.
        let p = RadialPotential::power_singular(1.0, 0.1, 3).unwrap();
        let w = RcnWindow::new(p, 0.0, 1.0, AnchorEdge::Lower).unwrap();
        let necessary = necessary_product(&w, &cfg()).unwrap();
        assert!((necessary.sup_product - 3.0 * 0.1 / 8.0).abs() < 1e-6);
        assert!(necessary.satisfied);
    }

    #[test]
    fn schwarzschild_near_horizon_slab_certifies_with_truncation() {
        // Window (2m, 2m + 0.05] anchored at the outer edge; the horizon side
        // is cut at tau depth 8.  q tau stays tiny there, so the constants
        // exist even though the dual potential is order one.
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        let w = RcnWindow::new(p, 2.0, 2.05, AnchorEdge::Upper).unwrap();
        let cert = certify_window(&w, &cfg()).unwrap();
        assert!(cert.samples.truncated);
        assert!(cert.samples.r_lo > 2.0);
        assert!(cert.feasible, "margin {}", cert.margin);
        assert!(cert.samples.sup_qtau < 0.05, "sup qtau {}", cert.samples.sup_qtau);
    }

    #[test]
    fn anchor_flips_away_from_horizon() {
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        // Requesting a lower anchor at the horizon is overridden.
        let w = RcnWindow::new(p, 2.0, 2.05, AnchorEdge::Lower).unwrap();
        assert_eq!(w.anchor(), AnchorEdge::Upper);
    }

    #[test]
    fn dyadic_layers_sweep_uniformly() {
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        let layers = RcnWindow::dyadic_layers(&p, 4, 8).unwrap();
        assert_eq!(layers.len(), 5);
        let mut c = cfg();
        c.samples = 65;
        let sweep = uniform_delta_sweep(&layers, &c).unwrap();
        assert!(sweep.ok, "min margin {}", sweep.min_margin);
        assert_eq!(sweep.windows.len(), 5);
        for w in &sweep.windows {
            assert!(w.margin > 0.0);
        }
        assert!(sweep.delta > 0.0 && sweep.delta < 1.0);
    }

    #[test]
    fn delta_bound_shape() {
        assert!((delta_bound(0.5, 0.1) - (0.4 / 0.6)).abs() < 1e-15);
        assert!(delta_bound(0.5, 0.5) == 0.0);
    }
}
