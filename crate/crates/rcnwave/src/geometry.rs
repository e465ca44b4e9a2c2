//! Inner-time charts: tau(r), its inverse, the weight profile
//! `w = q^{3/4} sigma tau`, the dual potential, and completeness probes.
//!
//! tau is the arc length of the radial segment measured in the rescaled
//! metric `q^{-1} dl^2`, so `d tau / d r = sqrt(g_rr) / sqrt(q)`.  Signs
//! follow the chart orientation: `tau_of_r(p, r_ref, r)` is negative for
//! `r < r_ref`.

use crate::error::Error;
use crate::potential::{EndpointKind, RadialPotential};
use crate::quadrature::{self, SingularEnds};
use serde::Serialize;

/// Signed inner time from `r_ref` to `r`: the integral of `sqrt(g_rr/q)`.
///
/// Either bound may coincide with a domain endpoint of finite inner time;
/// endpoints at infinite inner time are rejected.
pub fn tau_of_r(p: &RadialPotential, r_ref: f64, r: f64) -> Result<f64, Error> {
    let (a, b, sign) = if r >= r_ref { (r_ref, r, 1.0) } else { (r, r_ref, -1.0) };
    check_bound(p, a, true)?;
    check_bound(p, b, false)?;
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi) = p.domain();
    let ends = SingularEnds {
        lower: a <= lo + (b - a) * 1e-12 && p.inner_end() != EndpointKind::Regular,
        upper: hi.is_finite() && b >= hi - (b - a) * 1e-12 && p.outer_end() != EndpointKind::Regular,
    };
    let f = |x: f64| p.dtau_dr(x);
    let v = quadrature::integrate(&f, a, b, ends, quadrature::DEFAULT_REL_TOL)?;
    Ok(sign * v)
}

fn check_bound(p: &RadialPotential, r: f64, _is_lower: bool) -> Result<(), Error> {
    let (lo, hi) = p.domain();
    if r < lo || r > hi || !r.is_finite() {
        return Err(Error::OutOfDomain { what: "r", value: r, lo, hi });
    }
    if r == lo && p.inner_end() == EndpointKind::InfiniteTau {
        return Err(Error::NonIntegrableAtEndpoint { endpoint: r });
    }
    if r == hi && p.outer_end() == EndpointKind::InfiniteTau {
        return Err(Error::NonIntegrableAtEndpoint { endpoint: r });
    }
    Ok(())
}

/// A sampled, strictly monotone tau chart over `[r_lo, r_hi]` anchored at
/// `r_ref` (which need not lie inside the window).
#[derive(Debug, Clone, Serialize)]
pub struct InnerTimeChart {
    r_ref: f64,
    /// (r, tau) pairs, strictly increasing in both columns.
    samples: Vec<(f64, f64)>,
}

impl InnerTimeChart {
    /// Build a chart with `n_samples >= 2` nodes.  Nodes are uniform in r;
    /// accuracy of evaluation between nodes does not depend on the node count
    /// because lookups are polished with the exact integrand.
    pub fn build(
        p: &RadialPotential,
        r_ref: f64,
        r_lo: f64,
        r_hi: f64,
        n_samples: usize,
    ) -> Result<Self, Error> {
        if !(r_lo < r_hi) || n_samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "chart needs r_lo < r_hi and n_samples >= 2, got [{r_lo}, {r_hi}] x {n_samples}"
            )));
        }
        let mut samples = Vec::with_capacity(n_samples);
        let mut tau = tau_of_r(p, r_ref, r_lo)?;
        samples.push((r_lo, tau));
        for i in 1..n_samples {
            let r_prev = samples[i - 1].0;
            let r_next = r_lo + (r_hi - r_lo) * i as f64 / (n_samples - 1) as f64;
            // Cumulative segments: cheaper and better conditioned than
            // integrating from the anchor every time.
            let dt = tau_of_r(p, r_prev, r_next)?;
            tau += dt;
            if dt <= 0.0 {
                return Err(Error::NotMonotone { r: r_next });
            }
            samples.push((r_next, tau));
        }
        Ok(Self { r_ref, samples })
    }

    pub fn r_ref(&self) -> f64 {
        self.r_ref
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    pub fn tau_range(&self) -> (f64, f64) {
        (self.samples[0].1, self.samples[self.samples.len() - 1].1)
    }

    /// tau at an arbitrary radius in the chart range: integrate from the
    /// nearest node, so the cost stays local.
    pub fn tau_at(&self, p: &RadialPotential, r: f64) -> Result<f64, Error> {
        let (lo, hi) = self.r_range();
        if r < lo || r > hi {
            return Err(Error::OutOfDomain { what: "r", value: r, lo, hi });
        }
        let idx = match self.samples.partition_point(|&(x, _)| x <= r) {
            0 => 0,
            k if k >= self.samples.len() => self.samples.len() - 1,
            k => k - 1,
        };
        let (rn, tn) = self.samples[idx];
        Ok(tn + tau_of_r(p, rn, r)? - tau_of_r(p, rn, rn)?)
    }

    /// Inverse chart: radius at a given tau, polished with Newton steps on
    /// the exact integrand to ~1e-12 relative.
    pub fn r_of_tau(&self, p: &RadialPotential, tau: f64) -> Result<f64, Error> {
        let (t_lo, t_hi) = self.tau_range();
        if tau < t_lo - 1e-12 * (1.0 + t_hi.abs()) || tau > t_hi + 1e-12 * (1.0 + t_hi.abs()) {
            return Err(Error::OutOfDomain { what: "tau", value: tau, lo: t_lo, hi: t_hi });
        }
        let tau = tau.clamp(t_lo, t_hi);
        // Bracket by table lookup, then Newton with bisection fallback.
        let idx = match self.samples.partition_point(|&(_, t)| t <= tau) {
            0 => 0,
            k if k >= self.samples.len() => self.samples.len() - 2,
            k => (k - 1).min(self.samples.len() - 2),
        };
        let (mut ra, mut ta) = self.samples[idx];
        let (mut rb, tb) = self.samples[idx + 1];
        // Linear seed.
        let mut r = ra + (rb - ra) * ((tau - ta) / (tb - ta)).clamp(0.0, 1.0);
        for _ in 0..80 {
            let t = ta + tau_of_r(p, ra, r)?;
            let err = t - tau;
            if err.abs() <= 1e-13 * (1.0 + tau.abs()) {
                return Ok(r);
            }
            if err > 0.0 {
                rb = r;
            } else {
                ra = r;
                ta = t;
            }
            let slope = p.dtau_dr(r).max(1e-300);
            let newton = r - err / slope;
            r = if newton > ra && newton < rb {
                newton
            } else {
                0.5 * (ra + rb)
            };
            if rb - ra <= f64::EPSILON * rb.abs().max(1.0) {
                return Ok(r);
            }
        }
        Ok(r)
    }
}

/// Pointwise geometric data at a radius.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeometryProfile {
    pub r: f64,
    /// Unsigned inner time distance from the anchor.
    pub tau: f64,
    pub q: f64,
    pub sigma: f64,
    /// w = q^{3/4} sigma tau.
    pub w: f64,
    /// Dual potential tau |d ln w / d tau|.
    pub dual: f64,
}

/// Evaluate q, sigma, w and the dual potential at `r` with the chart anchored
/// at `r_ref`.
pub fn geometry_profile(
    p: &RadialPotential,
    r_ref: f64,
    r: f64,
) -> Result<GeometryProfile, Error> {
    p.check_contains(r)?;
    let tau_signed = tau_of_r(p, r_ref, r)?;
    let tau = tau_signed.abs();
    let q = p.q(r);
    let sigma = p.sigma(r);
    let w = q.powf(0.75) * sigma * tau;
    let dual = dual_potential(p, r_ref, r)?;
    Ok(GeometryProfile { r, tau, q, sigma, w, dual })
}

/// The dual potential `tau |d ln w / d tau|` at radius `r`, with
/// `w = q^{3/4} sigma tau` and tau the unsigned distance from `r_ref`.
///
/// In radial terms `d/d tau = (q/g_rr)^{1/2} d/dr` along the direction of
/// increasing tau, so the value is
/// `sqrt(q/g_rr) * tau * | (3/4) q'/q + (n-1)/(2r) + tau'/tau |`
/// with `tau' = sign(r - r_ref) sqrt(g_rr/q)`.
pub fn dual_potential(p: &RadialPotential, r_ref: f64, r: f64) -> Result<f64, Error> {
    let tau = tau_of_r(p, r_ref, r)?;
    dual_potential_at(p, r_ref, r, tau)
}

/// Same as [`dual_potential`] but with the signed tau already known
/// (certification loops precompute cumulative charts).
pub fn dual_potential_at(
    p: &RadialPotential,
    r_ref: f64,
    r: f64,
    tau_signed: f64,
) -> Result<f64, Error> {
    p.check_contains(r)?;
    let tau = tau_signed;
    if tau == 0.0 {
        return Err(Error::ZeroW { r });
    }
    let orient = tau.signum();
    let tau = tau.abs();
    if p.has_analytic_derivatives() {
        let q = p.q(r);
        let dlogw_dr =
            0.75 * p.dq_dr(r) / q + p.dlog_sigma_dr(r) + orient * p.dtau_dr(r) / tau;
        Ok((q / p.g_rr(r)).sqrt() * tau * dlogw_dr.abs())
    } else {
        // Tabulated weights: 4th-order central differences of ln w, stepping
        // in r and falling back to one-sided stencils near the table edges.
        let (lo, hi) = p.domain();
        let h0 = 1e-4 * (hi - lo).min(r.max(1.0));
        let h = h0.min((r - lo) / 4.0).min((hi - r) / 4.0).max(1e-12 * (hi - lo));
        let lw = |x: f64| -> Result<f64, Error> {
            let t = tau_of_r(p, r_ref, x)?.abs().max(1e-300);
            Ok(0.75 * p.q(x).ln() + p.sigma(x).ln() + t.ln())
        };
        let dlogw_dr = if r - 2.0 * h > lo && r + 2.0 * h < hi {
            (lw(r - 2.0 * h)? - 8.0 * lw(r - h)? + 8.0 * lw(r + h)? - lw(r + 2.0 * h)?)
                / (12.0 * h)
        } else if r + 4.0 * h < hi {
            // One-sided 4th order forward stencil.
            (-25.0 * lw(r)? + 48.0 * lw(r + h)? - 36.0 * lw(r + 2.0 * h)?
                + 16.0 * lw(r + 3.0 * h)?
                - 3.0 * lw(r + 4.0 * h)?)
                / (12.0 * h)
        } else {
            (25.0 * lw(r)? - 48.0 * lw(r - h)? + 36.0 * lw(r - 2.0 * h)?
                - 16.0 * lw(r - 3.0 * h)?
                + 3.0 * lw(r - 4.0 * h)?)
                / (12.0 * h)
        };
        Ok((p.q(r) / p.g_rr(r)).sqrt() * tau * dlogw_dr.abs())
    }
}

/// Verdict of a completeness probe toward one endpoint.
#[derive(Debug, Clone, Serialize)]
pub struct CompletenessReport {
    /// Endpoint probed.
    pub endpoint: f64,
    /// Inner times accumulated from the probe anchor to each geometric
    /// cutoff approaching the endpoint.
    pub tau_at_cutoffs: Vec<f64>,
    /// True when the sequence keeps growing instead of Cauchy-converging:
    /// the endpoint sits at infinite inner time.
    pub diverges: bool,
    /// Extrapolated finite limit when the sequence converges.
    pub tau_limit: Option<f64>,
}

/// Which end of the domain to probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inner,
    Outer,
}

/// Probe an endpoint through geometric cutoffs and decide whether tau
/// diverges there.  `r_anchor` must be interior.
pub fn completeness_report(
    p: &RadialPotential,
    side: Side,
    r_anchor: f64,
) -> Result<CompletenessReport, Error> {
    p.check_contains(r_anchor)?;
    let (lo, hi) = p.domain();
    let levels = 40usize;
    let mut taus = Vec::with_capacity(levels);
    let endpoint = match side {
        Side::Inner => lo,
        Side::Outer => hi,
    };
    // Accumulate tau segment by segment so each quadrature stays local.
    let mut r_prev = r_anchor;
    let mut acc = 0.0f64;
    for k in 1..=levels {
        let r_k = match side {
            Side::Inner => lo + (r_anchor - lo) * 0.5f64.powi(k as i32),
            Side::Outer => {
                if hi.is_finite() {
                    hi - (hi - r_anchor) * 0.5f64.powi(k as i32)
                } else {
                    r_anchor * 2f64.powi(k as i32)
                }
            }
        };
        acc += tau_of_r(p, r_prev, r_k)?.abs();
        r_prev = r_k;
        taus.push(acc);
    }
    let last = taus[levels - 1];
    let prev = taus[levels - 2];
    let mid = taus[levels / 2];
    // Converged if the deep tail is Cauchy at a scale-relative tolerance.
    let scale = 1.0 + last.abs();
    let diverges = (last - mid).abs() > 1e-6 * scale || (last - prev).abs() > 1e-9 * scale;
    let tau_limit = if diverges { None } else { Some(last) };
    Ok(CompletenessReport { endpoint, tau_at_cutoffs: taus, diverges, tau_limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn minkowski_tau_is_r() {
        let p = RadialPotential::minkowski(3);
        assert_relative_eq!(tau_of_r(&p, 0.0, 2.5).unwrap(), 2.5, max_relative = 1e-12);
        assert_relative_eq!(tau_of_r(&p, 2.5, 0.5).unwrap(), -2.0, max_relative = 1e-12);
    }

    #[test]
    fn power_law_tau_closed_form() {
        // tau = r^{alpha+1} / (beta (alpha+1)); alpha=1, beta=0.5, r=1 -> 1.
        let p = RadialPotential::power_singular(1.0, 0.5, 3).unwrap();
        assert_relative_eq!(tau_of_r(&p, 0.0, 1.0).unwrap(), 1.0, max_relative = 1e-10);
        let p2 = RadialPotential::power_singular(0.5, 2.0, 3).unwrap();
        let r: f64 = 1.7;
        assert_relative_eq!(
            tau_of_r(&p2, 0.0, r).unwrap(),
            r.powf(1.5) / (2.0 * 1.5),
            max_relative = 1e-10
        );
    }

    #[test]
    fn coulomb_and_spectral_tau() {
        let p = RadialPotential::coulomb();
        let r: f64 = 2.2;
        assert_relative_eq!(
            tau_of_r(&p, 0.0, r).unwrap(),
            2.0 / 3.0 * r.powf(1.5),
            max_relative = 1e-10
        );
        let s = RadialPotential::spectrum_hydrogen(3).unwrap();
        assert_relative_eq!(tau_of_r(&s, 0.0, r).unwrap(), 3.0 * r * r, max_relative = 1e-10);
    }

    #[test]
    fn schwarzschild_tortoise_difference() {
        // Antiderivative of r/(r-2m) is (r-2m) + 2m ln(r-2m); m=1:
        // tau(3 -> 4) = (2 + 2 ln 2) - (1 + 0) = 1 + 2 ln 2.
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        assert_relative_eq!(
            tau_of_r(&p, 3.0, 4.0).unwrap(),
            1.0 + 2.0 * (2.0f64).ln(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn de_sitter_tau_closed_form() {
        // tau = (ell/2) ln((1+r/ell)/(1-r/ell)); ell=1, r=0.5 -> (1/2) ln 3.
        let p = RadialPotential::de_sitter(1.0).unwrap();
        assert_relative_eq!(
            tau_of_r(&p, 0.0, 0.5).unwrap(),
            0.5 * (3.0f64).ln(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn dual_potential_minkowski_constant() {
        // Flat space: dual = (n+1)/2 everywhere (anchor at the origin).
        let p = RadialPotential::minkowski(3);
        for r in [0.1, 0.7, 2.0] {
            assert_relative_eq!(dual_potential(&p, 0.0, r).unwrap(), 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn dual_potential_power_law() {
        // alpha=1: dual = n/4 independent of r and beta.
        let p = RadialPotential::power_singular(1.0, 0.1, 3).unwrap();
        for r in [0.05, 0.3, 1.4] {
            assert_relative_eq!(dual_potential(&p, 0.0, r).unwrap(), 0.75, max_relative = 1e-9);
        }
        // General alpha < 1: (n - alpha + 1) / (2 (alpha + 1)).
        let p2 = RadialPotential::power_singular(0.5, 0.2, 3).unwrap();
        assert_relative_eq!(
            dual_potential(&p2, 0.0, 0.8).unwrap(),
            3.5 / 3.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn chart_round_trip() {
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        let chart = InnerTimeChart::build(&p, 3.0, 2.05, 6.0, 64).unwrap();
        for i in 0..40 {
            let r = 2.05 + (6.0 - 2.05) * i as f64 / 39.0;
            let t = chart.tau_at(&p, r).unwrap();
            let back = chart.r_of_tau(&p, t).unwrap();
            assert_relative_eq!(back, r, max_relative = 1e-9);
        }
    }

    #[test]
    fn completeness_verdicts() {
        let schw = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        assert!(completeness_report(&schw, Side::Inner, 3.0).unwrap().diverges);

        let pow = RadialPotential::power_singular(1.0, 0.5, 3).unwrap();
        let rep = completeness_report(&pow, Side::Inner, 1.0).unwrap();
        assert!(!rep.diverges);
        // tau(0 -> 1) = 1, so the probe limit is tau(1 -> 0) magnitude 1.
        assert_relative_eq!(rep.tau_limit.unwrap(), 1.0, max_relative = 1e-6);

        let ds = RadialPotential::de_sitter(1.0).unwrap();
        assert!(completeness_report(&ds, Side::Outer, 0.5).unwrap().diverges);

        // Fast-growing weight at infinity: finite total inner time outward.
        let pinf = RadialPotential::power_infinity(2.0, 1.0, 3).unwrap();
        assert!(!completeness_report(&pinf, Side::Outer, 1.0).unwrap().diverges);

        // Slow-growing weight: infinite inner time outward.
        let pslow = RadialPotential::power_infinity(0.5, 1.0, 3).unwrap();
        assert!(completeness_report(&pslow, Side::Outer, 1.0).unwrap().diverges);
    }

    #[test]
    fn custom_table_dual_matches_analytic() {
        // Table sampled from q = 1/r^2 (power_singular alpha=1, beta=1):
        // dual should come out near n/4 = 0.75 via finite differences.
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let r = 0.2 + 1.8 * i as f64 / 199.0;
                (r, 1.0 / (r * r))
            })
            .collect();
        let p = RadialPotential::custom_table(pts, 3).unwrap();
        let d = dual_potential(&p, 0.2, 1.0).unwrap();
        // Anchored at 0.2 rather than 0 (the table starts there): at r = 1,
        // tau = (1 - 0.04)/2 = 0.48, dlogw/dr = -3/2 + 1 + 1/0.48, and
        // dual = sqrt(q) tau |dlogw/dr| with sqrt(q) = 1.
        let tau = 0.48f64;
        let expect = tau * (-1.5f64 + 1.0 + 1.0 / tau).abs();
        assert_relative_eq!(d, expect, max_relative = 1e-4);
    }
}
