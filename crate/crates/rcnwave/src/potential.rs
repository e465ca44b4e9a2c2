//! The catalog of radial weights `q(r)` and their background metrics.
//!
//! Every entry knows its positivity domain, the radial metric coefficient
//! `g_rr` (1 for flat space, `1/q` scaled for the static spacetimes), and how
//! its endpoints behave: regular, singular with finite inner time, or at
//! infinite inner time (horizons and strong singularities).

use crate::error::Error;
use serde::{Deserialize, Serialize};

/// How an endpoint of the validity domain behaves under the tau chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointKind {
    /// tau extends continuously to the endpoint.
    Regular,
    /// q is singular there but tau stays finite (weak singularity).
    SingularFiniteTau,
    /// tau diverges toward the endpoint (horizon or strong singularity);
    /// the endpoint is "at infinity" in inner time.
    InfiniteTau,
}

/// Catalog entry tag with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Kind {
    /// q = 1 on flat R^n.
    Minkowski,
    /// q = beta^2 r^{-2 alpha} on flat R^n.
    PowerSingular { alpha: f64, beta: f64 },
    /// q = r^{-2} (-ln r)^{-delta} on flat R^n, r < 1.
    LogSingular { delta: f64 },
    /// q = beta^2 r^{2 alpha} on flat R^n (neighborhood of infinity).
    PowerInfinity { alpha: f64, beta: f64 },
    /// q = c^2 (1 - 2m/r), g_rr = c^2 / q; domain r > 2m.
    Schwarzschild { m: f64, c: f64 },
    /// q = 1 - r^2/ell^2, g_rr = 1/q; domain 0 < r < ell.
    DeSitter { ell: f64 },
    /// q = 1 - 2m/r + e^2/r^2, g_rr = 1/q, restricted to one component
    /// of positivity.
    ReissnerNordstrom { m: f64, e: f64 },
    /// Coulomb weight q = 1/r on flat R^3.
    Coulomb,
    /// Spectral hydrogen weight q = 1/(4 level^2 r^2) on flat R^3.
    SpectrumHydrogen { level: u32 },
    /// Tabulated (r, q) samples, monotone-cubic interpolated, flat metric.
    CustomTable { points: Vec<(f64, f64)> },
}

/// A radial weight together with its metric background and domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialPotential {
    kind: Kind,
    /// Spatial dimension (drives sigma = r^{(n-1)/2}).
    n: u32,
    domain: (f64, f64),
    inner_end: EndpointKind,
    outer_end: EndpointKind,
}

impl RadialPotential {
    pub fn minkowski(n: u32) -> Self {
        Self {
            kind: Kind::Minkowski,
            n,
            domain: (0.0, f64::INFINITY),
            inner_end: EndpointKind::Regular,
            outer_end: EndpointKind::InfiniteTau,
        }
    }

    pub fn power_singular(alpha: f64, beta: f64, n: u32) -> Result<Self, Error> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power_singular needs alpha > 0 and beta > 0, got alpha={alpha}, beta={beta}"
            )));
        }
        // tau(0) is finite for every alpha > 0 (integrand r^alpha / beta),
        // but tau(0)=0 with q blowing up: a weak singularity.
        Ok(Self {
            kind: Kind::PowerSingular { alpha, beta },
            n,
            domain: (0.0, f64::INFINITY),
            inner_end: EndpointKind::SingularFiniteTau,
            outer_end: EndpointKind::InfiniteTau,
        })
    }

    pub fn log_singular(delta: f64, n: u32) -> Result<Self, Error> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "log_singular needs delta > 0, got {delta}"
            )));
        }
        Ok(Self {
            kind: Kind::LogSingular { delta },
            n,
            domain: (0.0, 1.0),
            inner_end: EndpointKind::SingularFiniteTau,
            outer_end: EndpointKind::SingularFiniteTau,
        })
    }

    pub fn power_infinity(alpha: f64, beta: f64, n: u32) -> Result<Self, Error> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power_infinity needs alpha > 0 and beta > 0, got alpha={alpha}, beta={beta}"
            )));
        }
        let outer = if alpha > 1.0 {
            // integral of r^{-alpha} converges: infinity is at finite tau.
            EndpointKind::SingularFiniteTau
        } else {
            EndpointKind::InfiniteTau
        };
        Ok(Self {
            kind: Kind::PowerInfinity { alpha, beta },
            n,
            domain: (0.0, f64::INFINITY),
            inner_end: EndpointKind::SingularFiniteTau,
            outer_end: outer,
        })
    }

    pub fn schwarzschild(m: f64, c: f64) -> Result<Self, Error> {
        if !(m > 0.0) || !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "schwarzschild needs m > 0 and c > 0, got m={m}, c={c}"
            )));
        }
        Ok(Self {
            kind: Kind::Schwarzschild { m, c },
            n: 3,
            domain: (2.0 * m, f64::INFINITY),
            inner_end: EndpointKind::InfiniteTau,
            outer_end: EndpointKind::InfiniteTau,
        })
    }

    pub fn de_sitter(ell: f64) -> Result<Self, Error> {
        if !(ell > 0.0) {
            return Err(Error::InvalidParameter(format!("de_sitter needs ell > 0, got {ell}")));
        }
        Ok(Self {
            kind: Kind::DeSitter { ell },
            n: 3,
            domain: (0.0, ell),
            inner_end: EndpointKind::Regular,
            outer_end: EndpointKind::InfiniteTau,
        })
    }

    /// Reissner-Nordstrom weight restricted to the positivity component
    /// containing `r_probe`.
    pub fn reissner_nordstrom(m: f64, e: f64, r_probe: f64) -> Result<Self, Error> {
        if !(m > 0.0) || !(e != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "reissner_nordstrom needs m > 0 and e != 0, got m={m}, e={e}"
            )));
        }
        let e2 = e * e;
        let disc = m * m - e2;
        let (domain, inner_end, outer_end) = if disc > 0.0 {
            let r_minus = m - disc.sqrt();
            let r_plus = m + disc.sqrt();
            if r_probe < r_minus && r_probe > 0.0 {
                // Inner component: both ends at infinite tau would be wrong;
                // tau(0) is finite (integrand ~ r^2/e^2), the inner horizon
                // is at infinite tau.
                (
                    (0.0, r_minus),
                    EndpointKind::SingularFiniteTau,
                    EndpointKind::InfiniteTau,
                )
            } else if r_probe > r_plus {
                (
                    (r_plus, f64::INFINITY),
                    EndpointKind::InfiniteTau,
                    EndpointKind::InfiniteTau,
                )
            } else {
                return Err(Error::OnHorizon { r: r_probe });
            }
        } else if disc == 0.0 {
            if r_probe < m && r_probe > 0.0 {
                (
                    (0.0, m),
                    EndpointKind::SingularFiniteTau,
                    EndpointKind::InfiniteTau,
                )
            } else if r_probe > m {
                ((m, f64::INFINITY), EndpointKind::InfiniteTau, EndpointKind::InfiniteTau)
            } else {
                return Err(Error::OnHorizon { r: r_probe });
            }
        } else {
            // Naked singularity: q > 0 on all of (0, infinity).
            (
                (0.0, f64::INFINITY),
                EndpointKind::SingularFiniteTau,
                EndpointKind::InfiniteTau,
            )
        };
        Ok(Self {
            kind: Kind::ReissnerNordstrom { m, e },
            n: 3,
            domain,
            inner_end,
            outer_end,
        })
    }

    pub fn coulomb() -> Self {
        Self {
            kind: Kind::Coulomb,
            n: 3,
            domain: (0.0, f64::INFINITY),
            inner_end: EndpointKind::SingularFiniteTau,
            outer_end: EndpointKind::InfiniteTau,
        }
    }

    pub fn spectrum_hydrogen(level: u32) -> Result<Self, Error> {
        if level == 0 {
            return Err(Error::InvalidParameter("spectrum_hydrogen needs level >= 1".into()));
        }
        Ok(Self {
            kind: Kind::SpectrumHydrogen { level },
            n: 3,
            domain: (0.0, f64::INFINITY),
            inner_end: EndpointKind::SingularFiniteTau,
            outer_end: EndpointKind::InfiniteTau,
        })
    }

    /// Tabulated weight: `points` must be strictly increasing in r with
    /// strictly positive q values; interpolation is monotone cubic in between.
    pub fn custom_table(points: Vec<(f64, f64)>, n: u32) -> Result<Self, Error> {
        if points.len() < 4 {
            return Err(Error::InvalidParameter(
                "custom_table needs at least 4 sample points".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::NotMonotone { r: w[1].0 });
            }
        }
        if points.iter().any(|&(_, q)| !(q > 0.0) || !q.is_finite()) {
            return Err(Error::InvalidParameter("custom_table q values must be positive".into()));
        }
        let domain = (points[0].0, points[points.len() - 1].0);
        Ok(Self {
            kind: Kind::CustomTable { points },
            n,
            domain,
            inner_end: EndpointKind::Regular,
            outer_end: EndpointKind::Regular,
        })
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn inner_end(&self) -> EndpointKind {
        self.inner_end
    }

    pub fn outer_end(&self) -> EndpointKind {
        self.outer_end
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.domain.0 && r < self.domain.1
    }

    pub fn check_contains(&self, r: f64) -> Result<(), Error> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "r",
                value: r,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }

    /// The weight q(r).  Caller must keep r inside the open domain.
    pub fn q(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Minkowski => 1.0,
            Kind::PowerSingular { alpha, beta } => beta * beta * r.powf(-2.0 * alpha),
            Kind::LogSingular { delta } => r.powi(-2) * (-r.ln()).powf(-delta),
            Kind::PowerInfinity { alpha, beta } => beta * beta * r.powf(2.0 * alpha),
            Kind::Schwarzschild { m, c } => c * c * (1.0 - 2.0 * m / r),
            Kind::DeSitter { ell } => 1.0 - (r / ell) * (r / ell),
            Kind::ReissnerNordstrom { m, e } => 1.0 - 2.0 * m / r + e * e / (r * r),
            Kind::Coulomb => 1.0 / r,
            Kind::SpectrumHydrogen { level } => {
                let nl = *level as f64;
                1.0 / (4.0 * nl * nl * r * r)
            }
            Kind::CustomTable { points } => pchip_eval(points, r),
        }
    }

    /// d q / d r.
    pub fn dq_dr(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Minkowski => 0.0,
            Kind::PowerSingular { alpha, beta } => {
                -2.0 * alpha * beta * beta * r.powf(-2.0 * alpha - 1.0)
            }
            Kind::LogSingular { delta } => {
                // d/dr [ r^{-2} (-ln r)^{-delta} ]
                let l = -r.ln();
                -2.0 * r.powi(-3) * l.powf(-*delta) + r.powi(-3) * delta * l.powf(-delta - 1.0)
            }
            Kind::PowerInfinity { alpha, beta } => {
                2.0 * alpha * beta * beta * r.powf(2.0 * alpha - 1.0)
            }
            Kind::Schwarzschild { m, c } => c * c * 2.0 * m / (r * r),
            Kind::DeSitter { ell } => -2.0 * r / (ell * ell),
            Kind::ReissnerNordstrom { m, e } => 2.0 * m / (r * r) - 2.0 * e * e / (r * r * r),
            Kind::Coulomb => -1.0 / (r * r),
            Kind::SpectrumHydrogen { level } => {
                let nl = *level as f64;
                -1.0 / (2.0 * nl * nl * r * r * r)
            }
            Kind::CustomTable { points } => pchip_deriv(points, r),
        }
    }

    /// Radial metric coefficient g_rr (1 in flat space).
    pub fn g_rr(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Schwarzschild { c, .. } => c * c / self.q(r),
            Kind::DeSitter { .. } | Kind::ReissnerNordstrom { .. } => 1.0 / self.q(r),
            _ => 1.0,
        }
    }

    /// True for the static spacetime entries where g_rr = c^2/q, so the chart
    /// integrand is c/q instead of q^{-1/2}.
    pub fn is_black_hole_metric(&self) -> bool {
        matches!(
            self.kind,
            Kind::Schwarzschild { .. } | Kind::DeSitter { .. } | Kind::ReissnerNordstrom { .. }
        )
    }

    /// Chart integrand d tau / d r = sqrt(g_rr) / sqrt(q).
    pub fn dtau_dr(&self, r: f64) -> f64 {
        (self.g_rr(r) / self.q(r)).sqrt()
    }

    /// Angular density sigma(r) = r^{(n-1)/2} (normalization constant fixed
    /// to 1).
    pub fn sigma(&self, r: f64) -> f64 {
        r.powf((self.n as f64 - 1.0) / 2.0)
    }

    /// d ln sigma / d r = (n-1)/(2r).
    pub fn dlog_sigma_dr(&self, r: f64) -> f64 {
        (self.n as f64 - 1.0) / (2.0 * r)
    }

    /// Whether analytic derivatives of q are available (everything except the
    /// tabulated entry, whose derivative comes from finite differences of the
    /// interpolant in the callers that need higher accuracy).
    pub fn has_analytic_derivatives(&self) -> bool {
        !matches!(self.kind, Kind::CustomTable { .. })
    }
}

/// Monotone cubic (Fritsch-Carlson) interpolation on a strictly increasing
/// table.  Clamped to the table range.
fn pchip_slopes(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let h: Vec<f64> = points.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let delta: Vec<f64> = points
        .windows(2)
        .zip(&h)
        .map(|(w, hk)| (w[1].1 - w[0].1) / hk)
        .collect();
    let mut d = vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] <= 0.0 {
            d[k] = 0.0;
        } else {
            // Weighted harmonic mean keeps the interpolant monotone.
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d
}

fn pchip_segment(points: &[(f64, f64)], r: f64) -> usize {
    let n = points.len();
    match points.partition_point(|&(x, _)| x <= r) {
        0 => 0,
        k if k >= n => n - 2,
        k => k - 1,
    }
}

fn pchip_eval(points: &[(f64, f64)], r: f64) -> f64 {
    let d = pchip_slopes(points);
    let i = pchip_segment(points, r);
    let (x0, y0) = points[i];
    let (x1, y1) = points[i + 1];
    let h = x1 - x0;
    let t = ((r - x0) / h).clamp(0.0, 1.0);
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    h00 * y0 + h10 * h * d[i] + h01 * y1 + h11 * h * d[i + 1]
}

fn pchip_deriv(points: &[(f64, f64)], r: f64) -> f64 {
    let d = pchip_slopes(points);
    let i = pchip_segment(points, r);
    let (x0, y0) = points[i];
    let (x1, y1) = points[i + 1];
    let h = x1 - x0;
    let t = ((r - x0) / h).clamp(0.0, 1.0);
    let dh00 = 6.0 * t * t - 6.0 * t;
    let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
    let dh01 = -6.0 * t * t + 6.0 * t;
    let dh11 = 3.0 * t * t - 2.0 * t;
    (dh00 * y0 + dh10 * h * d[i] + dh01 * y1 + dh11 * h * d[i + 1]) / h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn minkowski_is_unit_weight() {
        let p = RadialPotential::minkowski(3);
        assert_eq!(p.q(0.7), 1.0);
        assert_eq!(p.dtau_dr(0.7), 1.0);
        assert_eq!(p.sigma(4.0), 4.0);
    }

    #[test]
    fn power_singular_matches_closed_forms() {
        let p = RadialPotential::power_singular(1.0, 0.5, 3).unwrap();
        assert_relative_eq!(p.q(2.0), 0.25 / 4.0, max_relative = 1e-14);
        // d tau / dr = r / beta for alpha = 1.
        assert_relative_eq!(p.dtau_dr(2.0), 4.0, max_relative = 1e-14);
    }

    #[test]
    fn schwarzschild_chart_integrand() {
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        // dtau/dr = 1/q = r/(r-2m)
        assert_relative_eq!(p.dtau_dr(3.0), 3.0, max_relative = 1e-13);
        assert_eq!(p.inner_end(), EndpointKind::InfiniteTau);
    }

    #[test]
    fn rn_components() {
        let p = RadialPotential::reissner_nordstrom(1.0, 0.6, 0.1).unwrap();
        let (lo, hi) = p.domain();
        assert_eq!(lo, 0.0);
        assert_relative_eq!(hi, 1.0 - (1.0f64 - 0.36).sqrt(), max_relative = 1e-14);
        assert!(RadialPotential::reissner_nordstrom(1.0, 0.6, 1.0).is_err());
        let outer = RadialPotential::reissner_nordstrom(1.0, 0.6, 3.0).unwrap();
        assert!(outer.q(3.0) > 0.0);
    }

    #[test]
    fn dq_matches_finite_difference() {
        let entries: Vec<RadialPotential> = vec![
            RadialPotential::power_singular(1.5, 0.3, 3).unwrap(),
            RadialPotential::log_singular(0.5, 3).unwrap(),
            RadialPotential::power_infinity(0.5, 2.0, 3).unwrap(),
            RadialPotential::schwarzschild(1.0, 2.0).unwrap(),
            RadialPotential::de_sitter(2.0).unwrap(),
            RadialPotential::reissner_nordstrom(1.0, 0.5, 5.0).unwrap(),
            RadialPotential::coulomb(),
            RadialPotential::spectrum_hydrogen(2).unwrap(),
        ];
        for p in &entries {
            let (lo, hi) = p.domain();
            let r = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                lo + 0.9_f64.max(lo * 0.5 + 0.9)
            };
            let h = 1e-6 * r.max(1.0);
            let fd = (p.q(r + h) - p.q(r - h)) / (2.0 * h);
            assert_relative_eq!(p.dq_dr(r), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn pchip_reproduces_table_and_stays_monotone() {
        let pts: Vec<(f64, f64)> = (0..12).map(|i| {
            let r = 0.5 + 0.25 * i as f64;
            (r, 1.0 / r)
        }).collect();
        let p = RadialPotential::custom_table(pts.clone(), 3).unwrap();
        for &(r, q) in &pts {
            if r > p.domain().0 && r < p.domain().1 {
                assert_relative_eq!(p.q(r), q, max_relative = 1e-12);
            }
        }
        // Interior values stay between neighboring samples (monotone).
        let mut prev = p.q(0.51);
        let mut r = 0.52;
        while r < 3.2 {
            let v = p.q(r);
            assert!(v <= prev + 1e-12, "interpolant not monotone at {r}");
            prev = v;
            r += 0.01;
        }
    }
}
