//! Radial wave evolution in the inner-time coordinate.
//!
//! Two conservative forms are evolved on a uniform tau grid with leapfrog
//! time stepping:
//!
//! * flat backgrounds (`g_rr = 1`): `u_tt = (1/rho)(a u_tau)_tau - V u` with
//!   `rho = q^{1/2} sigma^2`, `a = q^{-1/2} sigma^2`; the principal tau-speed
//!   is `q^{-1/2}`, at most 1 wherever `q >= 1`;
//! * black-hole metrics (`g_rr = c^2/q` or `1/q`): the geometric form
//!   `u_tt = (1/r^{n-1})(r^{n-1} u_tau)_tau - q V u`, which propagates at
//!   exactly unit tau-speed, so a horizon (sitting at infinite tau) is never
//!   reached at finite coordinate time.
//!
//! With the CFL fraction `nu = 1` on a uniform tau grid the discrete support
//! grows exactly one cell per step, which turns finite-speed claims into
//! exact (not merely approximate) statements about the computed solution.

use crate::error::Error;
use crate::geometry::tau_of_r;
use crate::potential::{EndpointKind, RadialPotential};
use serde::{Deserialize, Serialize};

/// Zeroth-order coupling of the evolution to the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Pure wave operator.
    None,
    /// The attractive potential `V = -q` (borderline-critical coupling).
    AttractiveQ,
}

/// A `cos^4` bump in tau with adjustable height (height 0 gives zero data).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Pulse {
    /// Center in grid tau (measured from the lower grid edge).
    pub center: f64,
    /// Half-width in tau.
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Pulse {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width, amplitude: 1.0 }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        let x = (tau - self.center) / self.width;
        if x.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (std::f64::consts::PI * x / 2.0).cos().powi(4)
        }
    }
}

/// Forcing term: a fixed spatial bump modulated by `cos(omega t)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SourceSpec {
    pub profile: Pulse,
    pub omega: f64,
}

impl SourceSpec {
    pub fn eval(&self, t: f64, tau: f64) -> f64 {
        self.profile.eval(tau) * (self.omega * t).cos()
    }
}

/// A wave evolution request on a radial window.
#[derive(Debug, Clone, Serialize)]
pub struct WaveScenario {
    pub potential: RadialPotential,
    pub r_lo: f64,
    pub r_hi: f64,
    pub coupling: Coupling,
    /// Number of tau cells (nodes = cells + 1).
    pub cells: usize,
    /// CFL fraction in (0, 1].
    pub nu: f64,
    pub t_end: f64,
    pub pulse: Pulse,
    /// Optional initial velocity profile (zero when absent: release at rest).
    pub v0: Option<Pulse>,
    /// Optional forcing term.
    pub source: Option<SourceSpec>,
    /// Explicit tau extent of the grid.  When absent it is recomputed from
    /// the radii; near-horizon slabs set it so that the grid keeps its full
    /// depth even when the horizon-side radii saturate at the last
    /// representable value (the coefficients there are constant to within
    /// one ulp, so the truncated chart stays exact to machine precision).
    pub tau_span: Option<f64>,
}

/// Solve `tau_of_r(p, r_from, r) = target` for r (signed target; the chart
/// is strictly increasing).  Used to march uniform tau grids and to find
/// radii at a prescribed tau depth.
pub fn step_tau(p: &RadialPotential, r_from: f64, target: f64) -> Result<f64, Error> {
    if target == 0.0 {
        return Ok(r_from);
    }
    let (dom_lo, dom_hi) = p.domain();
    // Bracket the root by marching geometrically toward the relevant edge.
    let (mut blo, mut bhi);
    if target > 0.0 {
        blo = r_from;
        let mut step = (target / p.dtau_dr(r_from))
            .abs()
            .max(1e-12 * r_from.abs().max(1.0))
            .min(r_from.abs().max(1.0));
        let mut r = r_from;
        loop {
            if dom_hi.is_finite() && dom_hi - r <= f64::EPSILON * dom_hi.abs() {
                if p.outer_end() == EndpointKind::InfiniteTau {
                    // Ran out of representable radii below the horizon: the
                    // remaining tau range lives inside one ulp of r, so the
                    // last representable radius is the honest answer.
                    return Ok(r);
                }
                return Err(Error::OutOfDomain { what: "tau", value: target, lo: 0.0, hi: 0.0 });
            }
            let cand = if dom_hi.is_finite() {
                dom_hi - (dom_hi - r) * 0.5
            } else {
                r + step
            };
            if cand <= r {
                // No representable radius strictly between r and the edge.
                return Ok(r);
            }
            if tau_of_r(p, r_from, cand)? >= target {
                bhi = cand;
                break;
            }
            blo = cand;
            r = cand;
            step *= 2.0;
        }
    } else {
        bhi = r_from;
        let mut step = (target / p.dtau_dr(r_from))
            .abs()
            .max(1e-12 * r_from.abs().max(1.0))
            .min(r_from.abs().max(1.0));
        let mut r = r_from;
        loop {
            let cand = if r - step > dom_lo {
                r - step
            } else {
                dom_lo + (r - dom_lo) * 0.5
            };
            if cand <= dom_lo {
                return Err(Error::OutOfDomain { what: "tau", value: target, lo: 0.0, hi: 0.0 });
            }
            if tau_of_r(p, r_from, cand)? <= target {
                blo = cand;
                break;
            }
            bhi = cand;
            r = cand;
            step *= 2.0;
            if r - dom_lo <= f64::EPSILON * r.abs().max(1e-300) {
                if p.inner_end() == EndpointKind::InfiniteTau {
                    // Ran out of representable radii before reaching the
                    // requested depth toward the horizon.
                    return Ok(r);
                }
                return Err(Error::OutOfDomain { what: "tau", value: target, lo: 0.0, hi: 0.0 });
            }
        }
    }
    // Newton polished bisection on the bracket.
    let mut r = 0.5 * (blo + bhi);
    for _ in 0..100 {
        let f = tau_of_r(p, r_from, r)? - target;
        if f.abs() <= 1e-13 * (1.0 + target.abs()) {
            return Ok(r);
        }
        if f > 0.0 {
            bhi = r;
        } else {
            blo = r;
        }
        let newton = r - f / p.dtau_dr(r).max(1e-300);
        r = if newton > blo && newton < bhi { newton } else { 0.5 * (blo + bhi) };
        if bhi - blo <= f64::EPSILON * bhi.abs().max(1e-300) {
            return Ok(r);
        }
    }
    Ok(r)
}

impl WaveScenario {
    /// A near-horizon slab: `tau_span` of inner time ending at `r_hi`, with
    /// the lower edge computed by marching toward the horizon.
    pub fn black_hole_slab(
        potential: RadialPotential,
        r_hi: f64,
        tau_span: f64,
        coupling: Coupling,
        cells: usize,
        nu: f64,
        t_end: f64,
        pulse: Pulse,
    ) -> Result<Self, Error> {
        if !potential.is_black_hole_metric() {
            return Err(Error::InvalidScenario(
                "black_hole_slab needs a black-hole metric".into(),
            ));
        }
        // De Sitter style horizons sit at the outer edge; Schwarzschild and
        // Reissner-Nordstrom exteriors at the inner edge.
        let inner_horizon = potential.inner_end() == EndpointKind::InfiniteTau;
        let (r_lo, r_hi) = if inner_horizon {
            (step_tau(&potential, r_hi, -tau_span)?, r_hi)
        } else {
            (r_hi, step_tau(&potential, r_hi, tau_span)?)
        };
        let mut sc = Self::new(potential, r_lo, r_hi, coupling, cells, nu, t_end, pulse)?;
        sc.tau_span = Some(tau_span);
        Ok(sc)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        potential: RadialPotential,
        r_lo: f64,
        r_hi: f64,
        coupling: Coupling,
        cells: usize,
        nu: f64,
        t_end: f64,
        pulse: Pulse,
    ) -> Result<Self, Error> {
        if !(r_lo < r_hi) {
            return Err(Error::InvalidScenario(format!(
                "wave window needs r_lo < r_hi, got [{r_lo}, {r_hi}]"
            )));
        }
        let (dom_lo, dom_hi) = potential.domain();
        if r_lo < dom_lo || r_hi > dom_hi {
            return Err(Error::InvalidScenario(format!(
                "wave window [{r_lo}, {r_hi}] outside weight domain [{dom_lo}, {dom_hi}]"
            )));
        }
        if r_lo == dom_lo && potential.inner_end() == EndpointKind::InfiniteTau {
            return Err(Error::InvalidScenario(
                "lower edge sits on a horizon; excise a near-horizon slab instead".into(),
            ));
        }
        if cells < 16 {
            return Err(Error::InvalidScenario(format!("need at least 16 cells, got {cells}")));
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::InvalidScenario(format!("nu must lie in (0, 1], got {nu}")));
        }
        if !(t_end > 0.0) {
            return Err(Error::InvalidScenario(format!("t_end must be positive, got {t_end}")));
        }
        if !(pulse.width > 0.0) || !(pulse.center > 0.0) || !pulse.amplitude.is_finite() {
            return Err(Error::InvalidScenario(
                "pulse needs positive center and width and finite amplitude".into(),
            ));
        }
        Ok(Self {
            potential,
            r_lo,
            r_hi,
            coupling,
            cells,
            nu,
            t_end,
            pulse,
            v0: None,
            source: None,
            tau_span: None,
        })
    }

    pub fn with_v0(mut self, v0: Pulse) -> Self {
        self.v0 = Some(v0);
        self
    }

    pub fn with_source(mut self, source: SourceSpec) -> Self {
        self.source = Some(source);
        self
    }
}

/// Discretized coefficients on the uniform tau grid.
#[derive(Debug, Clone, Serialize)]
pub struct WaveGrid {
    /// Node tau values (relative: tau = 0 at the lower edge).
    pub taus: Vec<f64>,
    /// Node radii.
    pub rs: Vec<f64>,
    pub dtau: f64,
    /// Node weights rho (the measure density in tau).
    pub rho: Vec<f64>,
    /// Flux coefficients at cell midpoints (len = cells).
    pub a_mid: Vec<f64>,
    /// Zeroth-order coefficient: the equation carries `+ v u` with
    /// `v = -V` (flat) or `-q V` (black hole).
    pub v: Vec<f64>,
    /// Largest principal tau-speed over the grid.
    pub max_speed: f64,
}

pub fn build_grid(scenario: &WaveScenario) -> Result<WaveGrid, Error> {
    let p = &scenario.potential;
    let n_nodes = scenario.cells + 1;
    let span = match scenario.tau_span {
        Some(s) => s,
        None => tau_of_r(p, scenario.r_lo, scenario.r_hi)?,
    };
    let dtau = span / scenario.cells as f64;
    let mut rs = Vec::with_capacity(n_nodes);
    let mut taus = Vec::with_capacity(n_nodes);
    rs.push(scenario.r_lo);
    taus.push(0.0);
    for j in 1..n_nodes {
        let prev = rs[j - 1];
        let next = if j == n_nodes - 1 {
            scenario.r_hi
        } else {
            step_tau(p, prev, dtau)?
        };
        rs.push(next);
        taus.push(j as f64 * dtau);
    }
    let bh = p.is_black_hole_metric();
    let weight = |r: f64| -> f64 {
        let s2 = r.powi(p.dimension() as i32 - 1);
        if bh {
            s2
        } else {
            s2 * p.q(r).sqrt()
        }
    };
    let flux = |r: f64| -> f64 {
        let s2 = r.powi(p.dimension() as i32 - 1);
        if bh {
            s2
        } else {
            s2 / p.q(r).sqrt()
        }
    };
    let rho: Vec<f64> = rs.iter().map(|&r| weight(r)).collect();
    let mut a_mid = Vec::with_capacity(scenario.cells);
    let mut max_speed = 0.0f64;
    for j in 0..scenario.cells {
        // Midpoint in tau, located by a half step from the left node.
        let rm = step_tau(p, rs[j], 0.5 * dtau)?;
        a_mid.push(flux(rm));
        // Conservative speed estimate (Gershgorin-style, using the lighter
        // of the two adjacent node weights).
        let speed2 = a_mid[j] / rho[j].min(rho[j + 1]);
        max_speed = max_speed.max(speed2.sqrt());
    }
    let v: Vec<f64> = rs
        .iter()
        .map(|&r| match scenario.coupling {
            Coupling::None => 0.0,
            // V = -q; the equation carries -V u (flat) or -q V u (black hole).
            Coupling::AttractiveQ => {
                if bh {
                    p.q(r) * p.q(r)
                } else {
                    p.q(r)
                }
            }
        })
        .collect();
    Ok(WaveGrid { taus, rs, dtau, rho, a_mid, v, max_speed })
}

/// One energy sample during the run, split into its quadratic parts
/// (total = kinetic + gradient + potential exactly, in the same discrete
/// measure as the stepper).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyRecord {
    pub t: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub gradient: f64,
    pub potential: f64,
}

/// Result of a wave evolution.
#[derive(Debug, Clone, Serialize)]
pub struct WaveOutcome {
    pub grid: WaveGrid,
    pub dt: f64,
    pub steps: usize,
    /// Solution at t_end.
    pub u: Vec<f64>,
    /// Solution one step earlier (for staggered diagnostics).
    pub u_prev: Vec<f64>,
    pub energy: Vec<EnergyRecord>,
    pub peak_initial: f64,
    /// Accumulated `int int rho^2 dmu dt` of the source over the run.
    pub source_l2: f64,
}

const BLOW_UP: f64 = 1e12;

/// Leapfrog-conserved discrete energy between consecutive levels.
fn discrete_energy(g: &WaveGrid, t: f64, u_new: &[f64], u_old: &[f64], dt: f64) -> EnergyRecord {
    let n = g.rho.len();
    let mut kinetic = 0.0;
    let mut gradient = 0.0;
    let mut potential = 0.0;
    for i in 0..n {
        let du = (u_new[i] - u_old[i]) / dt;
        kinetic += 0.5 * g.rho[i] * du * du * g.dtau;
        // The equation is u_tt = ... + v u, i.e. potential energy -v u^2 / 2.
        potential -= 0.5 * g.v[i] * g.rho[i] * u_new[i] * u_old[i] * g.dtau;
    }
    for j in 0..g.a_mid.len() {
        let dn = (u_new[j + 1] - u_new[j]) / g.dtau;
        let doo = (u_old[j + 1] - u_old[j]) / g.dtau;
        gradient += 0.5 * g.a_mid[j] * dn * doo * g.dtau;
    }
    EnergyRecord { t, energy: kinetic + gradient + potential, kinetic, gradient, potential }
}

/// Instantaneous energy of a state `(u, ut)` restricted to the shrinking
/// cone slice `{tau : t + (1 - delta_hat)^{1/2} tau <= t_hat}`; pass
/// `delta_hat = 1.0, t_hat = inf` for the full-domain slice.
pub fn energy_slice(
    g: &WaveGrid,
    u: &[f64],
    ut: &[f64],
    t: f64,
    delta_hat: f64,
    t_hat: f64,
) -> EnergyRecord {
    let slope = (1.0 - delta_hat).max(0.0).sqrt();
    let inside = |tau: f64| t + slope * tau <= t_hat;
    let n = g.rho.len();
    let mut kinetic = 0.0;
    let mut gradient = 0.0;
    let mut potential = 0.0;
    for i in 0..n {
        if inside(g.taus[i]) {
            kinetic += 0.5 * g.rho[i] * ut[i] * ut[i] * g.dtau;
            potential -= 0.5 * g.v[i] * g.rho[i] * u[i] * u[i] * g.dtau;
        }
    }
    for j in 0..g.a_mid.len() {
        if inside(0.5 * (g.taus[j] + g.taus[j + 1])) {
            let d = (u[j + 1] - u[j]) / g.dtau;
            gradient += 0.5 * g.a_mid[j] * d * d * g.dtau;
        }
    }
    EnergyRecord { t, energy: kinetic + gradient + potential, kinetic, gradient, potential }
}

/// Evolve the scenario to `t_end` with leapfrog and homogeneous Dirichlet
/// ends, recording the conserved discrete energy along the way.
pub fn run_wave(scenario: &WaveScenario) -> Result<WaveOutcome, Error> {
    let g = build_grid(scenario)?;
    let n = g.rs.len();
    let dt_raw = scenario.nu * g.dtau / g.max_speed.max(1e-300);
    let steps = (scenario.t_end / dt_raw).ceil() as usize;
    let dt = scenario.t_end / steps as f64;
    let mut u_old: Vec<f64> = g.taus.iter().map(|&t| scenario.pulse.eval(t)).collect();
    u_old[0] = 0.0;
    u_old[n - 1] = 0.0;
    let peak_initial = u_old.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    // The spatial operator L u = (1/rho)(a u_tau)_tau + v u on interior nodes.
    let apply = |u: &[f64], out: &mut [f64]| {
        out[0] = 0.0;
        out[n - 1] = 0.0;
        for i in 1..n - 1 {
            let flux = g.a_mid[i] * (u[i + 1] - u[i]) - g.a_mid[i - 1] * (u[i] - u[i - 1]);
            out[i] = flux / (g.rho[i] * g.dtau * g.dtau) + g.v[i] * u[i];
        }
    };
    let rho_at = |t: f64, out: &mut [f64]| {
        match &scenario.source {
            None => out.fill(0.0),
            Some(s) => {
                for (i, &tau) in g.taus.iter().enumerate() {
                    out[i] = s.eval(t, tau);
                }
                out[0] = 0.0;
                out[n - 1] = 0.0;
            }
        }
    };
    // int int rho^2 dmu dt, accumulated with the midpoint rule in time.
    let mut source_l2 = 0.0f64;
    let mut src = vec![0.0; n];
    let mut lu = vec![0.0; n];
    apply(&u_old, &mut lu);
    rho_at(0.0, &mut src);
    if scenario.source.is_some() {
        source_l2 += src.iter().zip(&g.rho).map(|(&s, &w)| s * s * w * g.dtau).sum::<f64>() * dt;
    }
    // Second-order Taylor start from (u0, v0).
    let mut u_cur: Vec<f64> = (0..n)
        .map(|i| {
            let v0 = scenario.v0.as_ref().map_or(0.0, |p| p.eval(g.taus[i]));
            u_old[i] + dt * v0 + 0.5 * dt * dt * (lu[i] + src[i])
        })
        .collect();
    u_cur[0] = 0.0;
    u_cur[n - 1] = 0.0;
    let stride = (steps / 200).max(1);
    let mut energy = vec![discrete_energy(&g, 0.5 * dt, &u_cur, &u_old, dt)];
    for m in 1..steps {
        let t = m as f64 * dt;
        apply(&u_cur, &mut lu);
        rho_at(t, &mut src);
        if scenario.source.is_some() {
            source_l2 +=
                src.iter().zip(&g.rho).map(|(&s, &w)| s * s * w * g.dtau).sum::<f64>() * dt;
        }
        for i in 1..n - 1 {
            let next = 2.0 * u_cur[i] - u_old[i] + dt * dt * (lu[i] + src[i]);
            u_old[i] = next; // reuse the old buffer as the new level
        }
        u_old[0] = 0.0;
        u_old[n - 1] = 0.0;
        std::mem::swap(&mut u_old, &mut u_cur);
        let amp = u_cur.iter().fold(0.0f64, |mm, &x| mm.max(x.abs()));
        if !amp.is_finite() || amp > BLOW_UP {
            return Err(Error::BlowUp { t: (m + 1) as f64 * dt, amplitude: amp });
        }
        if m % stride == 0 || m == steps - 1 {
            energy.push(discrete_energy(&g, (m as f64 + 0.5) * dt, &u_cur, &u_old, dt));
        }
    }
    Ok(WaveOutcome { grid: g, dt, steps, u: u_cur, u_prev: u_old, energy, peak_initial, source_l2 })
}

/// Relative drift of the conserved discrete energy over the run.
pub fn energy_drift(outcome: &WaveOutcome) -> f64 {
    let e0 = outcome.energy[0].energy;
    outcome
        .energy
        .iter()
        .map(|e| (e.energy - e0).abs())
        .fold(0.0f64, f64::max)
        / e0.abs().max(1e-300)
}

/// What to check about the propagation cone of a run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConeSpec {
    /// Claimed maximal tau-speed.
    pub speed: f64,
    /// Extra tolerance in cells beyond the exact cone.
    pub pad_cells: usize,
    pub check_lower: bool,
    pub check_upper: bool,
}

/// Largest amplitude found outside the claimed cone, relative to the initial
/// peak.
#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub cone_lo: f64,
    pub cone_hi: f64,
    pub max_outside: f64,
    pub peak_initial: f64,
    pub relative_leak: f64,
}

pub fn verify_cone(
    scenario: &WaveScenario,
    outcome: &WaveOutcome,
    spec: &ConeSpec,
) -> ConeReport {
    let pad = spec.pad_cells as f64 * outcome.grid.dtau;
    let cone_lo = scenario.pulse.center - scenario.pulse.width - spec.speed * scenario.t_end - pad;
    let cone_hi = scenario.pulse.center + scenario.pulse.width + spec.speed * scenario.t_end + pad;
    let mut max_outside = 0.0f64;
    for (i, &tau) in outcome.grid.taus.iter().enumerate() {
        let outside = (spec.check_lower && tau < cone_lo) || (spec.check_upper && tau > cone_hi);
        if outside {
            max_outside = max_outside.max(outcome.u[i].abs()).max(outcome.u_prev[i].abs());
        }
    }
    ConeReport {
        cone_lo,
        cone_hi,
        max_outside,
        peak_initial: outcome.peak_initial,
        relative_leak: max_outside / outcome.peak_initial.max(1e-300),
    }
}

/// Steady Dirichlet solve `-(1/rho)(a u_tau)_tau - v u = f` on the scenario
/// grid (the stationary counterpart of the evolution operator), by the
/// Thomas algorithm with a positivity check on the pivots.
pub fn solve_dirichlet(
    scenario: &WaveScenario,
    f: impl Fn(f64) -> f64,
) -> Result<(WaveGrid, Vec<f64>), Error> {
    let g = build_grid(scenario)?;
    let n = g.rs.len();
    let m = n - 2; // interior unknowns
    if m == 0 {
        return Err(Error::InvalidScenario("grid too small for a Dirichlet solve".into()));
    }
    let h2 = g.dtau * g.dtau;
    // Row i (interior node i+1): -a_{i}/h2 u_{i-1} + (a_i + a_{i+1})/h2 - v) u_i ...
    let mut diag: Vec<f64> = (0..m)
        .map(|i| (g.a_mid[i] + g.a_mid[i + 1]) / (g.rho[i + 1] * h2) - g.v[i + 1])
        .collect();
    let sub: Vec<f64> = (1..m).map(|i| -g.a_mid[i] / (g.rho[i + 1] * h2)).collect();
    let sup: Vec<f64> = (0..m - 1).map(|i| -g.a_mid[i + 1] / (g.rho[i + 1] * h2)).collect();
    let mut rhs: Vec<f64> = (0..m).map(|i| f(g.taus[i + 1])).collect();
    // Thomas elimination; an indefinite form shows up as a nonpositive pivot.
    for i in 0..m {
        if diag[i] <= 0.0 {
            return Err(Error::IndefiniteForm { row: i, pivot: diag[i] });
        }
        if i + 1 < m {
            let w = sub[i] / diag[i];
            diag[i + 1] -= w * sup[i];
            rhs[i + 1] -= w * rhs[i];
        }
    }
    let mut u_int = vec![0.0; m];
    u_int[m - 1] = rhs[m - 1] / diag[m - 1];
    for i in (0..m - 1).rev() {
        u_int[i] = (rhs[i] - sup[i] * u_int[i + 1]) / diag[i];
    }
    let mut u = vec![0.0; n];
    u[1..=m].copy_from_slice(&u_int);
    Ok((g, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn flat_line(cells: usize, nu: f64, t_end: f64) -> WaveScenario {
        WaveScenario::new(
            RadialPotential::minkowski(1),
            0.0,
            8.0,
            Coupling::None,
            cells,
            nu,
            t_end,
            Pulse::new(4.0, 0.5),
        )
        .unwrap()
    }

    /// d'Alembert: released from rest, u(t) = (f(x-t) + f(x+t))/2 before any
    /// boundary reflection.
    fn dalembert_error(cells: usize) -> f64 {
        let sc = flat_line(cells, 0.5, 1.5);
        let out = run_wave(&sc).unwrap();
        let mut worst = 0.0f64;
        for (i, &tau) in out.grid.taus.iter().enumerate() {
            let exact =
                0.5 * (sc.pulse.eval(tau - sc.t_end) + sc.pulse.eval(tau + sc.t_end));
            worst = worst.max((out.u[i] - exact).abs());
        }
        worst
    }

    #[test]
    fn dalembert_second_order_convergence() {
        let e1 = dalembert_error(200);
        let e2 = dalembert_error(400);
        let order = (e1 / e2).log2();
        assert!(e1 < 5e-2, "coarse error {e1}");
        assert!((1.7..=2.4).contains(&order), "order {order} (errors {e1}, {e2})");
    }

    #[test]
    fn energy_is_conserved() {
        let sc = flat_line(300, 0.5, 6.0);
        let out = run_wave(&sc).unwrap();
        assert!(energy_drift(&out) < 1e-10, "drift {}", energy_drift(&out));
    }

    #[test]
    fn energy_conserved_with_attractive_coupling() {
        // q = 0.01/r^2 on a window where positivity holds comfortably; the
        // potential energy is negative but the total stays put.
        let p = RadialPotential::power_singular(1.0, 0.1, 1).unwrap();
        let sc = WaveScenario::new(
            p,
            1e-4,
            1.0,
            Coupling::AttractiveQ,
            300,
            0.5,
            0.5,
            Pulse::new(0.4, 0.1),
        )
        .unwrap();
        let out = run_wave(&sc).unwrap();
        assert!(energy_drift(&out) < 1e-9, "drift {}", energy_drift(&out));
    }

    #[test]
    fn unit_cone_is_exact_at_full_cfl() {
        // Minkowski n = 1 has unit speed; at nu = 1 support grows exactly
        // one cell per step, so the leak beyond the padded cone is zero.
        let sc = flat_line(256, 1.0, 2.0);
        let out = run_wave(&sc).unwrap();
        let rep = verify_cone(
            &sc,
            &out,
            &ConeSpec { speed: 1.0, pad_cells: 2, check_lower: true, check_upper: true },
        );
        assert_eq!(rep.max_outside, 0.0, "leak {}", rep.relative_leak);
    }

    #[test]
    fn half_speed_cone_fails() {
        let sc = flat_line(256, 1.0, 2.5);
        let out = run_wave(&sc).unwrap();
        let rep = verify_cone(
            &sc,
            &out,
            &ConeSpec { speed: 0.5, pad_cells: 2, check_lower: true, check_upper: true },
        );
        assert!(rep.relative_leak > 1e-3, "leak {}", rep.relative_leak);
    }

    #[test]
    fn schwarzschild_slab_silo() {
        // Pulse near the horizon side of a tau-span-20 slab under Schwarzschild;
        // after t = 8 nothing has moved more than 8 tau outward (exactly, at
        // nu = 1 the discrete support does not outrun 1 cell/step).
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        let sc = WaveScenario::black_hole_slab(
            p,
            6.0,
            20.0,
            Coupling::None,
            500,
            1.0,
            8.0,
            Pulse::new(4.0, 1.0),
        )
        .unwrap();
        let out = run_wave(&sc).unwrap();
        assert!((out.grid.max_speed - 1.0).abs() < 1e-2, "speed {}", out.grid.max_speed);
        let rep = verify_cone(
            &sc,
            &out,
            &ConeSpec { speed: 1.0, pad_cells: 2, check_lower: false, check_upper: true },
        );
        assert_eq!(rep.max_outside, 0.0, "leak {}", rep.relative_leak);
    }

    #[test]
    fn black_hole_slab_spans_requested_tau() {
        let p = RadialPotential::schwarzschild(1.0, 1.0).unwrap();
        let sc = WaveScenario::black_hole_slab(
            p.clone(),
            6.0,
            20.0,
            Coupling::None,
            64,
            1.0,
            1.0,
            Pulse::new(4.0, 1.0),
        )
        .unwrap();
        let span = tau_of_r(&p, sc.r_lo, sc.r_hi).unwrap();
        assert_relative_eq!(span, 20.0, max_relative = 1e-9);
        assert!(sc.r_lo > 2.0 && sc.r_lo < 6.0);
    }

    #[test]
    fn dirichlet_solve_matches_sine_oracle() {
        // Minkowski n = 1 on [0, 1]: -u'' = pi^2 sin(pi tau) has
        // u = sin(pi tau), and the three-point scheme is O(h^2).
        let err = |cells: usize| -> f64 {
            let sc = WaveScenario::new(
                RadialPotential::minkowski(1),
                0.0,
                1.0,
                Coupling::None,
                cells,
                0.5,
                1.0,
                Pulse::new(0.5, 0.25),
            )
            .unwrap();
            let (g, u) = solve_dirichlet(&sc, |tau| {
                std::f64::consts::PI.powi(2) * (std::f64::consts::PI * tau).sin()
            })
            .unwrap();
            g.taus
                .iter()
                .zip(&u)
                .map(|(&t, &v)| (v - (std::f64::consts::PI * t).sin()).abs())
                .fold(0.0f64, f64::max)
        };
        let e1 = err(50);
        let e2 = err(100);
        assert!(e1 < 1e-2, "coarse error {e1}");
        let order = (e1 / e2).log2();
        assert!((1.8..=2.2).contains(&order), "order {order}");
    }

    #[test]
    fn dirichlet_reports_indefinite_forms() {
        // Strong attractive coupling on a wide window turns the form
        // indefinite, which must surface as an error, not a garbage solve.
        let p = RadialPotential::power_singular(1.0, 5.0, 1).unwrap();
        let sc = WaveScenario::new(
            p,
            1e-6,
            1.0,
            Coupling::AttractiveQ,
            200,
            0.5,
            1.0,
            Pulse::new(0.4, 0.1),
        )
        .unwrap();
        let res = solve_dirichlet(&sc, |_| 1.0);
        assert!(matches!(res, Err(Error::IndefiniteForm { .. })));
    }

    #[test]
    fn zero_data_stays_zero() {
        let mut sc = flat_line(64, 0.5, 2.0);
        sc.pulse.amplitude = 0.0;
        let out = run_wave(&sc).unwrap();
        assert!(out.u.iter().all(|&x| x == 0.0));
        assert!(out.u_prev.iter().all(|&x| x == 0.0));
        assert_eq!(out.peak_initial, 0.0);
    }

    #[test]
    fn sourced_run_obeys_energy_inequality() {
        // E(t) <= C1 (E(0) + int int rho^2 dmu dt); the measured C1 must not
        // grow by more than 10% when the grid is refined.
        let c1 = |cells: usize| -> f64 {
            let sc = flat_line(cells, 0.5, 6.0).with_source(SourceSpec {
                profile: Pulse::new(4.0, 1.0),
                omega: 2.0,
            });
            let out = run_wave(&sc).unwrap();
            let e0 = out.energy[0].energy;
            let e_max = out.energy.iter().map(|e| e.energy).fold(0.0f64, f64::max);
            e_max / (e0 + out.source_l2)
        };
        let coarse = c1(200);
        let fine = c1(400);
        assert!(fine <= 1.1 * coarse, "C1 grew: {coarse} -> {fine}");
        assert!(coarse.is_finite() && coarse > 0.0);
    }

    #[test]
    fn energy_slice_matches_standing_profile() {
        // u = sin(pi tau) on [0, 1] at rest in Minkowski n = 1:
        // E = (1/2) int (pi cos(pi tau))^2 dtau = pi^2 / 4.
        let sc = WaveScenario::new(
            RadialPotential::minkowski(1),
            0.0,
            1.0,
            Coupling::None,
            400,
            0.5,
            1.0,
            Pulse::new(0.5, 0.25),
        )
        .unwrap();
        let g = build_grid(&sc).unwrap();
        let u: Vec<f64> =
            g.taus.iter().map(|&t| (std::f64::consts::PI * t).sin()).collect();
        let ut = vec![0.0; u.len()];
        let e = energy_slice(&g, &u, &ut, 0.0, 1.0, f64::INFINITY);
        assert_relative_eq!(e.energy, std::f64::consts::PI.powi(2) / 4.0, max_relative = 1e-4);
        assert_eq!(e.kinetic, 0.0);
        // A cone slice whose tip has passed is empty.
        let tip = energy_slice(&g, &u, &ut, 10.0, 0.5, 1.0);
        assert_eq!(tip.energy, 0.0);
    }

    #[test]
    fn energy_parts_sum_to_total() {
        let p = RadialPotential::power_singular(1.0, 0.1, 1).unwrap();
        let sc = WaveScenario::new(
            p,
            1e-4,
            1.0,
            Coupling::AttractiveQ,
            200,
            0.5,
            0.5,
            Pulse::new(0.4, 0.1),
        )
        .unwrap();
        let out = run_wave(&sc).unwrap();
        for e in &out.energy {
            assert_relative_eq!(
                e.energy,
                e.kinetic + e.gradient + e.potential,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn blow_up_is_detected() {
        // Same supercritical coupling evolved in time: exponential growth
        // must trip the blow-up guard rather than overflow silently.
        let p = RadialPotential::power_singular(1.0, 5.0, 1).unwrap();
        let sc = WaveScenario::new(
            p,
            1e-6,
            1.0,
            Coupling::AttractiveQ,
            200,
            0.5,
            40.0,
            Pulse::new(0.05, 0.02),
        )
        .unwrap();
        assert!(matches!(run_wave(&sc), Err(Error::BlowUp { .. })));
    }
}
