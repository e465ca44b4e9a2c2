//! Closed-form inner-time charts for standard static spacetimes, light-cone
//! geometry, and the exact-rational hydrogen uncertainty products.
//!
//! The closed forms are the antiderivatives of `1/q` (for the black-hole
//! metrics, where `d tau / d r = 1/q` with c = 1) or `q^{-1/2}` (flat
//! backgrounds).  Branches whose domain starts at r = 0 are normalized so
//! tau(0) = 0; the remaining branches are plain antiderivatives, so only
//! differences of their values are meaningful.

use crate::error::Error;
use crate::potential::RadialPotential;
use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

/// Supported spacetime models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpacetimeModel {
    /// q = c^2 (1 - 2m/r), r > 2m.
    Schwarzschild { m: f64, c: f64 },
    /// q = 1 - 2m/r + e^2/r^2.
    ReissnerNordstrom { m: f64, e: f64 },
    /// q = 1 - r^2/ell^2, 0 <= r < ell.
    DeSitter { ell: f64 },
    /// Coulomb weight q = 1/r.
    Hydrogen,
    /// Spectral hydrogen weight q = 1/(4 level^2 r^2).
    SpectrumHydrogen { level: u32 },
}

impl SpacetimeModel {
    /// The matching catalog entry (for quadrature cross-checks); Reissner-
    /// Nordstrom needs a probe radius to pick the positivity component.
    pub fn potential(&self, r_probe: f64) -> Result<RadialPotential, Error> {
        match *self {
            SpacetimeModel::Schwarzschild { m, c } => RadialPotential::schwarzschild(m, c),
            SpacetimeModel::ReissnerNordstrom { m, e } => {
                RadialPotential::reissner_nordstrom(m, e, r_probe)
            }
            SpacetimeModel::DeSitter { ell } => RadialPotential::de_sitter(ell),
            SpacetimeModel::Hydrogen => Ok(RadialPotential::coulomb()),
            SpacetimeModel::SpectrumHydrogen { level } => {
                RadialPotential::spectrum_hydrogen(level)
            }
        }
    }
}

/// Reissner-Nordstrom chart branches, keyed by the charge/mass regime and the
/// position of the radius relative to the horizons.
///
/// * two horizons (m^2 > e^2): 1 = inside the inner horizon (anchored at the
///   center), 2 = inside the inner horizon (horizon-side antiderivative),
///   3 = outside the outer horizon;
/// * extremal (m^2 = e^2): 4 = inside (anchored at the center), 5 = inside
///   (horizon-side), 6 = outside;
/// * naked singularity (m^2 < e^2): 7 = global chart anchored at the center.
pub fn rn_regime(m: f64, e: f64, r: f64) -> Result<u8, Error> {
    if !(m > 0.0) || e == 0.0 || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rn_regime needs m > 0, e != 0, r > 0; got m={m}, e={e}, r={r}"
        )));
    }
    let disc = m * m - e * e;
    if disc > 0.0 {
        let r_minus = m - disc.sqrt();
        let r_plus = m + disc.sqrt();
        if r < r_minus {
            Ok(1)
        } else if r > r_plus {
            Ok(3)
        } else {
            Err(Error::OnHorizon { r })
        }
    } else if disc == 0.0 {
        if r < m {
            Ok(4)
        } else if r > m {
            Ok(6)
        } else {
            Err(Error::OnHorizon { r })
        }
    } else {
        Ok(7)
    }
}

/// Closed-form Reissner-Nordstrom tau for an explicit branch id (1..=7).
///
/// Branches 1, 4 and 7 are normalized so tau(0) = 0 and near the center
/// tau = r^3/(3 e^2) + O(r^4).  Branches 2, 3, 5 and 6 are horizon-side
/// antiderivatives of `1/q` (monotone on their domain, divergent at the
/// horizon); use differences of values.
pub fn rn_tau_branch(m: f64, e: f64, branch: u8, r: f64) -> Result<f64, Error> {
    let e2 = e * e;
    let disc = m * m - e2;
    match branch {
        1 | 2 | 3 => {
            if disc <= 0.0 {
                return Err(Error::InvalidParameter(
                    "branches 1-3 need two horizons (m^2 > e^2)".into(),
                ));
            }
            let s = disc.sqrt();
            let r_minus = m - s;
            let r_plus = m + s;
            // 1/q = r^2/((r - r_minus)(r - r_plus))
            //     = 1 - (r_minus^2/(2s)) / (r - r_minus)
            //         + (r_plus^2/(2s)) / (r - r_plus).
            let a = r_minus * r_minus / (2.0 * s);
            let b = r_plus * r_plus / (2.0 * s);
            match branch {
                1 => {
                    if !(r >= 0.0 && r < r_minus) {
                        return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: r_minus });
                    }
                    // Anchored: F(r) - F(0) with logs kept positive.
                    Ok(r - a * ((r_minus - r) / r_minus).ln() + b * ((r_plus - r) / r_plus).ln())
                }
                2 => {
                    if !(r > 0.0 && r < r_minus) {
                        return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: r_minus });
                    }
                    // Horizon-side: diverges to +infinity as r -> r_minus^-.
                    Ok(-(r - a * (r_minus - r).ln() + b * (r_plus - r).ln()))
                }
                _ => {
                    if !(r > r_plus) {
                        return Err(Error::OutOfDomain {
                            what: "r",
                            value: r,
                            lo: r_plus,
                            hi: f64::INFINITY,
                        });
                    }
                    // Outward antiderivative, divergent toward r_plus^+.
                    Ok(r - a * (r - r_minus).ln() + b * (r - r_plus).ln())
                }
            }
        }
        4 | 5 | 6 => {
            if disc != 0.0 {
                return Err(Error::InvalidParameter(
                    "branches 4-6 need the extremal case m^2 = e^2".into(),
                ));
            }
            // 1/q = r^2/(r - m)^2 = 1 + 2m/(r - m) + m^2/(r - m)^2;
            // antiderivative G(r) = r + 2m ln|r - m| - m^2/(r - m).
            match branch {
                4 => {
                    if !(r >= 0.0 && r < m) {
                        return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: m });
                    }
                    // G(r) - G(0), with G(0) = 2m ln m + m.
                    Ok(r + 2.0 * m * ((m - r) / m).ln() - m * m / (r - m) - m)
                }
                5 => {
                    if !(r > 0.0 && r < m) {
                        return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: m });
                    }
                    Ok(-(r + 2.0 * m * (m - r).ln() - m * m / (r - m)))
                }
                _ => {
                    if !(r > m) {
                        return Err(Error::OutOfDomain {
                            what: "r",
                            value: r,
                            lo: m,
                            hi: f64::INFINITY,
                        });
                    }
                    Ok(r + 2.0 * m * (r - m).ln() - m * m / (r - m))
                }
            }
        }
        7 => {
            if disc >= 0.0 {
                return Err(Error::InvalidParameter(
                    "branch 7 needs a naked singularity (m^2 < e^2)".into(),
                ));
            }
            if !(r >= 0.0) {
                return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: f64::INFINITY });
            }
            // 1/q = 1 + (2mr - e^2)/(r^2 - 2mr + e^2); with s = sqrt(e^2-m^2):
            // tau = r + m ln((r^2 - 2mr + e^2)/e^2)
            //         + ((2m^2 - e^2)/s) (atan((r-m)/s) + atan(m/s)).
            let s = (e2 - m * m).sqrt();
            Ok(r + m * ((r * r - 2.0 * m * r + e2) / e2).ln()
                + (2.0 * m * m - e2) / s * (((r - m) / s).atan() + (m / s).atan()))
        }
        _ => Err(Error::InvalidParameter(format!("unknown branch id {branch}"))),
    }
}

/// Closed-form tau for a spacetime model at radius r.
///
/// Schwarzschild uses the corrected tortoise antiderivative
/// `(r - 2m)/c + (2m/c) ln(r - 2m)` (so tau(3) = 1 for m = c = 1); only
/// differences are metrically meaningful.  De Sitter, hydrogen and the
/// spectral weight are anchored at the center.  For Reissner-Nordstrom the
/// branch is chosen by [`rn_regime`].
pub fn spacetime_tau(model: &SpacetimeModel, r: f64) -> Result<f64, Error> {
    match *model {
        SpacetimeModel::Schwarzschild { m, c } => {
            if !(r > 2.0 * m) {
                return Err(Error::OutOfDomain {
                    what: "r",
                    value: r,
                    lo: 2.0 * m,
                    hi: f64::INFINITY,
                });
            }
            Ok(((r - 2.0 * m) + 2.0 * m * (r - 2.0 * m).ln()) / c)
        }
        SpacetimeModel::ReissnerNordstrom { m, e } => {
            let branch = rn_regime(m, e, r)?;
            rn_tau_branch(m, e, branch, r)
        }
        SpacetimeModel::DeSitter { ell } => {
            if !(r >= 0.0 && r < ell) {
                return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: ell });
            }
            Ok(ell / 2.0 * ((1.0 + r / ell) / (1.0 - r / ell)).ln())
        }
        SpacetimeModel::Hydrogen => {
            if !(r >= 0.0) {
                return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: f64::INFINITY });
            }
            Ok(2.0 / 3.0 * r.powf(1.5))
        }
        SpacetimeModel::SpectrumHydrogen { level } => {
            if !(r >= 0.0) {
                return Err(Error::OutOfDomain { what: "r", value: r, lo: 0.0, hi: f64::INFINITY });
            }
            Ok(level as f64 * r * r)
        }
    }
}

/// Ratio of the closed-form Reissner-Nordstrom tau near the center to its
/// leading Taylor term `r^3 / (3 e^2)`; approaches 1 as r -> 0.
pub fn origin_taylor_ratio(m: f64, e: f64, r: f64) -> Result<f64, Error> {
    let branch = rn_regime(m, e, r)?;
    if !matches!(branch, 1 | 4 | 7) {
        return Err(Error::InvalidParameter(format!(
            "origin Taylor ratio needs a center-anchored branch, got branch {branch} at r = {r}"
        )));
    }
    let tau = rn_tau_branch(m, e, branch, r)?;
    Ok(tau / (r * r * r / (3.0 * e * e)))
}

/// Radial light rays through an emission event, in (t, tau) coordinates of
/// the Lorentzian metric `-q dt^2 + dl^2`: straight lines of slope +-1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LightCone {
    pub t0: f64,
    pub tau0: f64,
}

impl LightCone {
    pub fn new(t0: f64, tau0: f64) -> Self {
        Self { t0, tau0 }
    }

    /// Coordinate time at which the outgoing (tau-increasing) ray reaches tau.
    pub fn t_outgoing(&self, tau: f64) -> f64 {
        self.t0 + (tau - self.tau0)
    }

    /// Coordinate time at which the ingoing ray reaches tau.
    pub fn t_ingoing(&self, tau: f64) -> f64 {
        self.t0 + (self.tau0 - tau)
    }

    /// Whether the event (t, tau) lies inside (or on) the forward cone.
    pub fn contains(&self, t: f64, tau: f64) -> bool {
        t - self.t0 >= (tau - self.tau0).abs()
    }
}

/// Light-cone rays from an emission event at radius `r0`, time `t0` in a
/// spacetime model; since horizons sit at infinite tau, neither ray reaches
/// them at finite coordinate time.
pub fn light_cone(model: &SpacetimeModel, t0: f64, r0: f64) -> Result<LightCone, Error> {
    Ok(LightCone::new(t0, spacetime_tau(model, r0)?))
}

/// Exact rational arithmetic for the hydrogen level pairs.
pub type Rational = Ratio<i128>;

/// Energy-time uncertainty product for the hydrogen transition between
/// levels n1 < n2 (atomic units):
/// `dE * dt = (1/6) |1/n1^2 - 1/n2^2| * |n2^3 - n1^3|`.
pub fn uncertainty(n1: u32, n2: u32) -> Result<Rational, Error> {
    if n1 == 0 || n2 == 0 || n1 == n2 {
        return Err(Error::InvalidParameter(format!(
            "uncertainty needs distinct positive levels, got ({n1}, {n2})"
        )));
    }
    let a = i128::from(n1);
    let b = i128::from(n2);
    let de = (Rational::new(1, a * a) - Rational::new(1, b * b)).abs();
    let dt = Rational::from_integer((b * b * b - a * a * a).abs());
    Ok(de * dt / Rational::from_integer(6))
}

/// Brute-force minimum of the uncertainty product over all level pairs
/// `1 <= n1 < n2 <= n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct UncertaintyMinimum {
    pub n1: u32,
    pub n2: u32,
    #[serde(serialize_with = "crate::report::serialize_rational")]
    pub value: Rational,
    /// The ground-state pair (1,2) gives 7/8; the value claimed minimal in
    /// the source analysis.  The brute-force minimum is smaller (already
    /// (2,3) = 95/216 < 7/8), so this flag reports whether the honest search
    /// agrees with that claim.
    pub matches_claimed_minimum: bool,
}

pub fn uncertainty_minimum(n_max: u32) -> Result<UncertaintyMinimum, Error> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("uncertainty_minimum needs n_max >= 2".into()));
    }
    let mut best: Option<(u32, u32, Rational)> = None;
    for n1 in 1..n_max {
        for n2 in (n1 + 1)..=n_max {
            let v = uncertainty(n1, n2)?;
            if best.as_ref().map_or(true, |(_, _, b)| v < *b) {
                best = Some((n1, n2, v));
            }
        }
    }
    let (n1, n2, value) = best.expect("n_max >= 2 guarantees at least one pair");
    let matches = (n1, n2) == (1, 2) && value == Rational::new(7, 8);
    Ok(UncertaintyMinimum { n1, n2, value, matches_claimed_minimum: matches })
}
