//! Quadratic-form checks: Hardy-type ratios, positivity of the attractive
//! potential term against the gradient form, cutoff partitions with the IMS
//! localization identity, and the self-adjointness threshold.
//!
//! All forms are taken with respect to the radial measure
//! `d mu = g_rr^(1/2) r^(n-1) dr` with gradient energy `phi'^2 / g_rr`; for
//! flat backgrounds this is the ordinary weight `r^(n-1) dr` against `phi'^2`.

use crate::error::Error;
use crate::potential::RadialPotential;
use crate::quadrature::{integrate, SingularEnds};
use serde::Serialize;
use std::f64::consts::PI;

const FORM_TOL: f64 = 1e-10;

/// Shape of a compactly supported radial trial function on `[r_in, r_out]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProfileShape {
    /// `(r - r_in)^2 (r_out - r)^2`, scaled to peak height 1.
    PolynomialBump,
    /// Gaussian centered in the window, windowed to zero at the edges.
    GaussianBump,
    /// Piecewise-linear hat peaking at the midpoint.
    PiecewiseLinear,
    /// `r^s sin(pi ln(r/r_in) / ln(r_out/r_in))`: the log-stretched profile
    /// that saturates sharp Hardy constants as the window widens.
    LogSine { s: f64 },
}

/// A trial function for form evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestProfile {
    pub shape: ProfileShape,
    pub r_in: f64,
    pub r_out: f64,
}

impl TestProfile {
    pub fn new(shape: ProfileShape, r_in: f64, r_out: f64) -> Result<Self, Error> {
        if !(r_in >= 0.0 && r_in < r_out) {
            return Err(Error::InvalidParameter(format!(
                "profile needs 0 <= r_in < r_out, got [{r_in}, {r_out}]"
            )));
        }
        if matches!(shape, ProfileShape::LogSine { .. }) && r_in <= 0.0 {
            return Err(Error::InvalidParameter(
                "log-sine profiles need r_in > 0".into(),
            ));
        }
        Ok(Self { shape, r_in, r_out })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.r_in || r >= self.r_out {
            return 0.0;
        }
        let (a, b) = (self.r_in, self.r_out);
        match self.shape {
            ProfileShape::PolynomialBump => {
                let h = 0.5 * (b - a);
                (r - a) * (r - a) * (b - r) * (b - r) / (h * h * h * h)
            }
            ProfileShape::GaussianBump => {
                let c = 0.5 * (a + b);
                let w = (b - a) / 8.0;
                let g = (-((r - c) / w).powi(2) / 2.0).exp();
                // Subtract the edge value so the profile is continuous at the
                // window boundary (the derivative jump there is negligible).
                let edge = (-((b - c) / w).powi(2) / 2.0).exp();
                (g - edge).max(0.0)
            }
            ProfileShape::PiecewiseLinear => {
                let c = 0.5 * (a + b);
                if r <= c {
                    (r - a) / (c - a)
                } else {
                    (b - r) / (b - c)
                }
            }
            ProfileShape::LogSine { s } => {
                let ell = (r / a).ln();
                let big_l = (b / a).ln();
                r.powf(s) * (PI * ell / big_l).sin()
            }
        }
    }

    pub fn deriv(&self, r: f64) -> f64 {
        if r <= self.r_in || r >= self.r_out {
            return 0.0;
        }
        let (a, b) = (self.r_in, self.r_out);
        match self.shape {
            ProfileShape::PolynomialBump => {
                let h = 0.5 * (b - a);
                2.0 * (r - a) * (b - r) * ((b - r) - (r - a)) / (h * h * h * h)
            }
            ProfileShape::GaussianBump => {
                let c = 0.5 * (a + b);
                let w = (b - a) / 8.0;
                let g = (-((r - c) / w).powi(2) / 2.0).exp();
                -(r - c) / (w * w) * g
            }
            ProfileShape::PiecewiseLinear => {
                let c = 0.5 * (a + b);
                if r <= c {
                    1.0 / (c - a)
                } else {
                    -1.0 / (b - c)
                }
            }
            ProfileShape::LogSine { s } => {
                let ell = (r / a).ln();
                let big_l = (b / a).ln();
                let ph = PI * ell / big_l;
                r.powf(s - 1.0) * (s * ph.sin() + PI / big_l * ph.cos())
            }
        }
    }

    /// Interior breakpoints where the derivative jumps (quadrature panels
    /// must not straddle them).
    fn kinks(&self) -> Vec<f64> {
        match self.shape {
            ProfileShape::PiecewiseLinear => vec![0.5 * (self.r_in + self.r_out)],
            _ => Vec::new(),
        }
    }
}

/// Integrate `f` over the profile support, splitting at derivative kinks and
/// flagging a singular lower end when the support starts at a singular
/// domain endpoint.
fn form_integral(
    p: &RadialPotential,
    profile: &TestProfile,
    f: &dyn Fn(f64) -> f64,
) -> Result<f64, Error> {
    let (dom_lo, dom_hi) = p.domain();
    let a = profile.r_in.max(dom_lo);
    let b = profile.r_out.min(dom_hi);
    if !(a < b) {
        return Err(Error::OutOfDomain { what: "profile", value: profile.r_in, lo: dom_lo, hi: dom_hi });
    }
    let mut cuts = vec![a];
    for k in profile.kinks() {
        if k > a && k < b {
            cuts.push(k);
        }
    }
    cuts.push(b);
    let mut total = 0.0;
    for wdw in cuts.windows(2) {
        let singular_lo = wdw[0] == dom_lo
            && p.inner_end() != crate::potential::EndpointKind::Regular;
        let ends = if singular_lo { SingularEnds::lower() } else { SingularEnds::none() };
        total += integrate(&|x| f(x), wdw[0], wdw[1], ends, FORM_TOL)?;
    }
    Ok(total)
}

/// The two sides of the positivity comparison for one trial function.
#[derive(Debug, Clone, Serialize)]
pub struct FormCheck {
    /// `int q phi^2 dmu`.
    pub potential_term: f64,
    /// `int phi'^2 / g_rr dmu`.
    pub gradient_term: f64,
    /// `potential_term / gradient_term`.
    pub ratio: f64,
    pub delta: f64,
    /// Whether `potential_term <= delta * gradient_term`.
    pub holds: bool,
}

/// Evaluate `int q phi^2 dmu` against `delta int |grad phi|^2 dmu`.
pub fn positivity_check(
    p: &RadialPotential,
    profile: &TestProfile,
    delta: f64,
) -> Result<FormCheck, Error> {
    let n = p.dimension();
    let measure = |r: f64| p.g_rr(r).sqrt() * r.powi(n as i32 - 1);
    let phi2q = |r: f64| {
        let v = profile.eval(r);
        p.q(r) * v * v * measure(r)
    };
    let grad2 = |r: f64| {
        let d = profile.deriv(r);
        d * d / p.g_rr(r) * measure(r)
    };
    let potential_term = form_integral(p, profile, &phi2q)?;
    let gradient_term = form_integral(p, profile, &grad2)?;
    let ratio = potential_term / gradient_term;
    Ok(FormCheck {
        potential_term,
        gradient_term,
        ratio,
        delta,
        holds: potential_term <= delta * gradient_term,
    })
}

/// Hardy quotient of a profile for the pure inverse-square weight
/// `q = 1/r^2` in dimension n (flat measure `r^(n-1) dr`).
pub fn hardy_ratio(profile: &TestProfile, n: u32) -> Result<f64, Error> {
    let p = RadialPotential::power_singular(1.0, 1.0, n)?;
    Ok(positivity_check(&p, profile, 1.0)?.ratio)
}

/// Outcome of a falsification sweep: the largest Hardy-type quotient found
/// across a family of trial profiles, and the witness if it beats delta.
#[derive(Debug, Clone, Serialize)]
pub struct PositivitySweep {
    pub delta: f64,
    pub best_ratio: f64,
    pub violated: bool,
    pub witness: Option<TestProfile>,
    pub profiles_tried: usize,
}

/// Try to falsify `int q phi^2 dmu <= delta int |grad phi|^2 dmu` over a
/// family of trial profiles inside `[r_min, r_max]`.
///
/// The family mixes bump shapes with log-stretched profiles `r^s sin(...)`
/// whose exponent `s = (2 - n)/2` balances the measure against an
/// inverse-square weight; those are the profiles that approach sharp Hardy
/// constants, so a violation that exists at all shows up here.
pub fn falsify_positivity(
    p: &RadialPotential,
    delta: f64,
    r_min: f64,
    r_max: f64,
) -> Result<PositivitySweep, Error> {
    if !(r_min >= 0.0 && r_min < r_max) {
        return Err(Error::InvalidParameter(format!(
            "sweep needs 0 <= r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    let n = p.dimension();
    let s_star = (2.0 - n as f64) / 2.0;
    let mut profiles: Vec<TestProfile> = Vec::new();
    for shape in [
        ProfileShape::PolynomialBump,
        ProfileShape::GaussianBump,
        ProfileShape::PiecewiseLinear,
    ] {
        profiles.push(TestProfile::new(shape, r_min, r_max)?);
    }
    // Log-stretched windows [r_max e^-L, r_max] for a ladder of widths.
    for &big_l in &[5.0f64, 10.0, 20.0, 30.0, 40.0] {
        let r_in = r_max * (-big_l).exp();
        if r_in <= r_min.max(1e-300) {
            continue;
        }
        for ds in [-0.25, 0.0, 0.25] {
            profiles.push(TestProfile::new(
                ProfileShape::LogSine { s: s_star + ds },
                r_in,
                r_max,
            )?);
        }
    }
    let mut best_ratio = f64::NEG_INFINITY;
    let mut witness = None;
    for prof in &profiles {
        let check = positivity_check(p, prof, delta)?;
        if check.ratio > best_ratio {
            best_ratio = check.ratio;
            if !check.holds {
                witness = Some(*prof);
            }
        }
    }
    Ok(PositivitySweep {
        delta,
        best_ratio,
        violated: best_ratio > delta,
        witness,
        profiles_tried: profiles.len(),
    })
}

/// A smooth quadratic partition of unity on `[lo, hi]`: `sum chi_k^2 = 1`
/// exactly, with cosine/sine crossfades of half-width `h` at the interior
/// cuts.
#[derive(Debug, Clone, Serialize)]
pub struct CutoffFamily {
    pub lo: f64,
    pub hi: f64,
    /// Interior cut positions, strictly increasing.
    pub cuts: Vec<f64>,
    /// Transition half-width shared by all cuts.
    pub h: f64,
}

impl CutoffFamily {
    pub fn new(lo: f64, hi: f64, cuts: Vec<f64>, h: f64) -> Result<Self, Error> {
        if !(lo < hi) || !(h > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cutoff family needs lo < hi and h > 0, got [{lo}, {hi}], h = {h}"
            )));
        }
        let mut prev = lo;
        for &c in &cuts {
            if c - h <= prev || c + h >= hi {
                // A transition sticking out of the window (or overlapping its
                // neighbor) leaves part of the cover ill-defined.
                return Err(Error::CoverageGap { lo: prev, hi: c });
            }
            prev = c + h;
        }
        Ok(Self { lo, hi, cuts, h })
    }

    pub fn len(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// chi_k at radius r.
    pub fn eval(&self, k: usize, r: f64) -> f64 {
        let m = self.len();
        assert!(k < m, "cutoff index out of range");
        if r < self.lo || r > self.hi {
            return 0.0;
        }
        let mut v = 1.0f64;
        // Left transition (rising) at cut k-1, right transition (falling) at
        // cut k; v is the product of the two ramps.
        if k > 0 {
            let c = self.cuts[k - 1];
            let s = ((r - (c - self.h)) / (2.0 * self.h)).clamp(0.0, 1.0);
            v *= (PI * s / 2.0).sin();
        }
        if k < m - 1 {
            let c = self.cuts[k];
            let s = ((r - (c - self.h)) / (2.0 * self.h)).clamp(0.0, 1.0);
            v *= (PI * s / 2.0).cos();
        }
        v
    }

    /// d chi_k / dr at radius r (transitions never overlap, so at most one
    /// factor varies).
    pub fn deriv(&self, k: usize, r: f64) -> f64 {
        let m = self.len();
        assert!(k < m, "cutoff index out of range");
        if r < self.lo || r > self.hi {
            return 0.0;
        }
        let rate = PI / (4.0 * self.h);
        if k > 0 {
            let c = self.cuts[k - 1];
            if r > c - self.h && r < c + self.h {
                let s = (r - (c - self.h)) / (2.0 * self.h);
                return rate * (PI * s / 2.0).cos();
            }
        }
        if k < m - 1 {
            let c = self.cuts[k];
            if r > c - self.h && r < c + self.h {
                let s = (r - (c - self.h)) / (2.0 * self.h);
                return -rate * (PI * s / 2.0).sin();
            }
        }
        0.0
    }

    /// sum_k chi_k(r)^2; identically 1 on the window.
    pub fn unity_defect(&self, r: f64) -> f64 {
        let total: f64 = (0..self.len()).map(|k| self.eval(k, r).powi(2)).sum();
        total - 1.0
    }

    /// Quadrature breakpoints: window edges plus transition edges.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![self.lo];
        for &c in &self.cuts {
            pts.push(c - self.h);
            pts.push(c + self.h);
        }
        pts.push(self.hi);
        pts
    }
}

/// Both sides of the IMS localization identity for a profile and a cutoff
/// family:
///
/// ```text
/// sum_k int |(chi_k phi)'|^2 dmu
///   = int |phi'|^2 dmu + sum_k int |chi_k'|^2 phi^2 dmu
/// ```
#[derive(Debug, Clone, Serialize)]
pub struct ImsCheck {
    pub localized: f64,
    pub global: f64,
    pub remainder: f64,
    pub relative_error: f64,
}

pub fn ims_error(
    p: &RadialPotential,
    family: &CutoffFamily,
    profile: &TestProfile,
) -> Result<ImsCheck, Error> {
    // Verify the quadratic cover before using it.
    for i in 0..=64 {
        let r = family.lo + (family.hi - family.lo) * i as f64 / 64.0;
        if family.unity_defect(r).abs() > 1e-12 {
            return Err(Error::CoverageGap { lo: family.lo, hi: family.hi });
        }
    }
    let n = p.dimension();
    let measure = |r: f64| p.g_rr(r).sqrt() * r.powi(n as i32 - 1);
    let m = family.len();
    let localized_f = |r: f64| {
        let v = profile.eval(r);
        let d = profile.deriv(r);
        let mut acc = 0.0;
        for k in 0..m {
            let g = family.deriv(k, r) * v + family.eval(k, r) * d;
            acc += g * g;
        }
        acc / p.g_rr(r) * measure(r)
    };
    let global_f = |r: f64| {
        let d = profile.deriv(r);
        d * d / p.g_rr(r) * measure(r)
    };
    let remainder_f = |r: f64| {
        let v = profile.eval(r);
        let mut acc = 0.0;
        for k in 0..m {
            let d = family.deriv(k, r);
            acc += d * d;
        }
        acc * v * v / p.g_rr(r) * measure(r)
    };
    let mut pts = family.breakpoints();
    for k in profile.kinks() {
        if k > family.lo && k < family.hi {
            pts.push(k);
        }
    }
    pts.sort_by(f64::total_cmp);
    let piecewise = |f: &dyn Fn(f64) -> f64| -> Result<f64, Error> {
        let mut total = 0.0;
        for wdw in pts.windows(2) {
            if wdw[1] > wdw[0] {
                total += integrate(&|x| f(x), wdw[0], wdw[1], SingularEnds::none(), FORM_TOL)?;
            }
        }
        Ok(total)
    };
    let localized = piecewise(&localized_f)?;
    let global = piecewise(&global_f)?;
    let remainder = piecewise(&remainder_f)?;
    let rhs = global + remainder;
    Ok(ImsCheck {
        localized,
        global,
        remainder,
        relative_error: (localized - rhs).abs() / rhs.abs().max(1e-300),
    })
}

/// Lower bound transferred from positivity: when
/// `int q phi^2 <= delta int |grad phi|^2`, the wave form with the
/// attractive potential `V = -q` satisfies
/// `int (|grad phi|^2 - q phi^2) >= (1 - delta) int |grad phi|^2`.
#[derive(Debug, Clone, Serialize)]
pub struct MinorantCheck {
    pub form_value: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

pub fn minorant_form_check(
    p: &RadialPotential,
    profile: &TestProfile,
    delta: f64,
) -> Result<MinorantCheck, Error> {
    let c = positivity_check(p, profile, delta)?;
    let form_value = c.gradient_term - c.potential_term;
    let lower_bound = (1.0 - delta) * c.gradient_term;
    Ok(MinorantCheck {
        form_value,
        lower_bound,
        holds: form_value >= lower_bound - 1e-12 * c.gradient_term.abs(),
    })
}

/// Essential self-adjointness of `-Delta - beta^2/r^2` on the punctured
/// space needs `beta^2 <= (n-2)^2/4 - 1`... more precisely the combined
/// requirement here is `(n - 2)^2 / 4 >= 1 + alpha`: the dimension must be
/// large enough that the sharp inverse-square threshold leaves room for the
/// coupling ladder up to `1 + alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct SelfAdjointReport {
    pub n: u32,
    pub alpha: f64,
    /// `(n - 2)^2 / 4`.
    pub threshold: f64,
    /// `1 + alpha`.
    pub required: f64,
    pub feasible: bool,
    /// The coupling `beta = (n - 2)/2` sitting exactly at the sharp
    /// constant, usable as a witness when feasible.
    pub beta_witness: f64,
}

pub fn self_adjointness_feasible(n: u32, alpha: f64) -> Result<SelfAdjointReport, Error> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    let threshold = ((n as f64) - 2.0).powi(2) / 4.0;
    let required = 1.0 + alpha;
    Ok(SelfAdjointReport {
        n,
        alpha,
        threshold,
        required,
        feasible: threshold >= required,
        beta_witness: ((n as f64) - 2.0) / 2.0,
    })
}
