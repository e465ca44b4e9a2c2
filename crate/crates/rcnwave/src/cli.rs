//! Command line front end.
//!
//! Exit codes: 0 ok, 1 usage or schema problems, 2 a mathematical condition
//! failed (infeasible certificate, violated inequality, failed check), 3 a
//! numerical failure (blow-up, no quadrature convergence).

use crate::error::Error;
use crate::forms::{
    falsify_positivity, hardy_ratio, ims_error, minorant_form_check, self_adjointness_feasible,
    CutoffFamily, ProfileShape, TestProfile,
};
use crate::geometry::InnerTimeChart;
use crate::potential::RadialPotential;
use crate::rcn::{certify_window, uniform_delta_sweep, AnchorEdge, RcnWindow, SearchConfig};
use crate::report::{write_json, Table};
use crate::scenario::{CheckSpec, ScenarioFile};
use crate::spacetime::{
    light_cone, origin_taylor_ratio, rn_regime, spacetime_tau, uncertainty, uncertainty_minimum,
    SpacetimeModel,
};
use crate::wave::{energy_drift, run_wave, solve_dirichlet, verify_cone, ConeSpec, Pulse};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "rcnwave", version, about = "Inner-time geometry, window certification and radial wave runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Export an inner-time chart as CSV (columns r, tau).
    Tau {
        #[arg(long)]
        scenario: PathBuf,
        /// Explicit radii; defaults to a uniform sample of the grid window.
        #[arg(long, num_args = 1..)]
        r_values: Vec<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Certify one window: certificate JSON; exit 0 feasible, 2 infeasible.
    RcnCheck {
        #[arg(long)]
        scenario: PathBuf,
        /// Window bounds: LO HI.
        #[arg(long, num_args = 2)]
        window: Vec<f64>,
        #[arg(long, value_parser = ["lower", "upper"], default_value = "lower")]
        anchor: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Certify dyadic near-edge layers with one shared (A, delta_0).
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Layer range KLO:KHI (layer k spans [edge+2^-k, edge+2^-k+1]).
        #[arg(long)]
        layers: String,
        /// Required lower bound on the contraction constant delta.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Quadratic-form checks; exit 2 when the required inequality fails.
    Forms {
        #[arg(long, value_parser = ["hardy", "positivity", "ims", "minorant", "self-adjoint"])]
        check: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Log-sine exponent for the hardy check.
        #[arg(long)]
        s: Option<f64>,
        /// Window bounds: LO HI.
        #[arg(long, num_args = 2, default_values_t = [0.0, 1.0])]
        window: Vec<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a wave scenario; snapshots + energies + check reports.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Static Dirichlet solve on the scenario grid; CSV (r, tau, u).
    Dirichlet {
        #[arg(long)]
        scenario: PathBuf,
        /// Source: "zero", "one", "sin:K" (sin(K pi tau)) or "bump:C:W".
        #[arg(long, default_value = "one")]
        rho_spec: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Closed-form spacetime charts, light cones and regime queries.
    Spacetime {
        /// One of schwarzschild:M:C, de_sitter:L, rn:M:E, hydrogen, spectrum:N.
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = ["tau", "cone", "regime", "taylor"])]
        op: String,
        #[arg(long, num_args = 1..)]
        r: Vec<f64>,
        /// Emission time for light cones.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact rational energy-time uncertainty products.
    Uncertainty {
        #[arg(long)]
        n1: Option<u32>,
        #[arg(long)]
        n2: Option<u32>,
        /// Brute-force minimum over all pairs up to this level.
        #[arg(long)]
        min: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Self-adjointness feasibility; exit 2 when infeasible.
    SelfAdjoint {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version to stdout with success; real usage
            // errors go to stderr with exit 1.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(out: &OutArg, value: &T) -> Result<(), Error> {
    match &out.out {
        Some(path) => write_json(std::fs::File::create(path)?, value),
        None => write_json(std::io::stdout().lock(), value),
    }
}

fn emit_csv(out: &OutArg, table: &Table) -> Result<(), Error> {
    match &out.out {
        Some(path) => table.write_csv(std::fs::File::create(path)?),
        None => table.write_csv(std::io::stdout().lock()),
    }
}

fn parse_model(text: &str) -> Result<SpacetimeModel, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64, Error> {
        s.parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number '{s}' in model '{text}'")))
    };
    match parts.as_slice() {
        ["schwarzschild", m, c] => Ok(SpacetimeModel::Schwarzschild { m: num(m)?, c: num(c)? }),
        ["de_sitter", ell] => Ok(SpacetimeModel::DeSitter { ell: num(ell)? }),
        ["rn", m, e] => Ok(SpacetimeModel::ReissnerNordstrom { m: num(m)?, e: num(e)? }),
        ["hydrogen"] => Ok(SpacetimeModel::Hydrogen),
        ["spectrum", lvl] => {
            let level = lvl.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad level '{lvl}' in model '{text}'"))
            })?;
            Ok(SpacetimeModel::SpectrumHydrogen { level })
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown model '{text}' (expected schwarzschild:M:C, de_sitter:L, rn:M:E, hydrogen, spectrum:N)"
        ))),
    }
}

fn dispatch(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Tau { scenario, r_values, samples, out } => {
            let file = ScenarioFile::from_path(&scenario)?;
            let p = file.build_potential()?;
            let (r_lo, r_hi) = file.radial_window()?;
            let rs: Vec<f64> = if r_values.is_empty() {
                (0..samples)
                    .map(|i| r_lo + (r_hi - r_lo) * i as f64 / (samples - 1).max(1) as f64)
                    .collect()
            } else {
                r_values
            };
            let chart = InnerTimeChart::build(&p, r_lo, r_lo, r_hi, 65)?;
            let mut table = Table::new(&["r", "tau"]);
            for r in rs {
                table.push_floats(&[r, chart.tau_at(&p, r)?]);
            }
            emit_csv(&out, &table)?;
            Ok(0)
        }
        Command::RcnCheck { scenario, window, anchor, out } => {
            let file = ScenarioFile::from_path(&scenario)?;
            let p = file.build_potential()?;
            let edge = if anchor == "upper" { AnchorEdge::Upper } else { AnchorEdge::Lower };
            let w = RcnWindow::new(p, window[0], window[1], edge)?;
            let cert = certify_window(&w, &SearchConfig::default())?;
            emit(&out, &cert)?;
            Ok(if cert.feasible { 0 } else { 2 })
        }
        Command::Sweep { scenario, layers, delta, out } => {
            let file = ScenarioFile::from_path(&scenario)?;
            let p = file.build_potential()?;
            let (k_lo, k_hi) = layers
                .split_once(':')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("layers must be KLO:KHI, got '{layers}'"))
                })?;
            let windows = RcnWindow::dyadic_layers(&p, k_lo, k_hi)?;
            let sweep = uniform_delta_sweep(&windows, &SearchConfig::default())?;
            let pass = sweep.ok && sweep.delta >= delta;
            emit(&out, &sweep)?;
            Ok(if pass { 0 } else { 2 })
        }
        Command::Forms { check, n, alpha, beta, delta, s, window, out } => {
            let (lo, hi) = (window[0], window[1]);
            match check.as_str() {
                "hardy" => {
                    let s = s.unwrap_or(0.5);
                    let prof = TestProfile::new(ProfileShape::LogSine { s }, lo.max(1e-18), hi)?;
                    let ratio = hardy_ratio(&prof, n)?;
                    let sharp = if n == 1 { 4.0 } else { 4.0 / ((n as f64) - 2.0).powi(2) };
                    #[derive(Serialize)]
                    struct HardyReport {
                        n: u32,
                        s: f64,
                        ratio: f64,
                        sharp_constant: f64,
                        holds: bool,
                    }
                    let rep = HardyReport { n, s, ratio, sharp_constant: sharp, holds: ratio <= sharp };
                    emit(&out, &rep)?;
                    Ok(if rep.holds { 0 } else { 2 })
                }
                "positivity" => {
                    let p = RadialPotential::power_singular(alpha, beta, n)?;
                    let sweep = falsify_positivity(&p, delta, lo, hi)?;
                    emit(&out, &sweep)?;
                    Ok(if sweep.violated { 2 } else { 0 })
                }
                "ims" => {
                    let p = RadialPotential::minkowski(n);
                    let w = hi - lo;
                    let fam = CutoffFamily::new(
                        lo,
                        hi,
                        vec![lo + w / 3.0, lo + 2.0 * w / 3.0],
                        w / 20.0,
                    )?;
                    let prof = TestProfile::new(ProfileShape::PolynomialBump, lo, hi)?;
                    let rep = ims_error(&p, &fam, &prof)?;
                    let pass = rep.relative_error <= 1e-8;
                    emit(&out, &rep)?;
                    Ok(if pass { 0 } else { 2 })
                }
                "minorant" => {
                    let p = RadialPotential::power_singular(alpha, beta, n)?;
                    let prof = TestProfile::new(ProfileShape::PolynomialBump, lo, hi)?;
                    let rep = minorant_form_check(&p, &prof, delta)?;
                    emit(&out, &rep)?;
                    Ok(if rep.holds { 0 } else { 2 })
                }
                "self-adjoint" => {
                    let rep = self_adjointness_feasible(n, alpha)?;
                    emit(&out, &rep)?;
                    Ok(if rep.feasible { 0 } else { 2 })
                }
                other => Err(Error::InvalidParameter(format!("unknown forms check '{other}'"))),
            }
        }
        Command::Simulate { scenario } => simulate(&scenario),
        Command::Dirichlet { scenario, rho_spec, out } => {
            let file = ScenarioFile::from_path(&scenario)?;
            let sc = file.to_wave_scenario()?;
            let rho = parse_rho(&rho_spec)?;
            let (grid, u) = solve_dirichlet(&sc, |tau| rho(tau))?;
            let mut table = Table::new(&["r", "tau", "u"]);
            for i in 0..u.len() {
                table.push_floats(&[grid.rs[i], grid.taus[i], u[i]]);
            }
            emit_csv(&out, &table)?;
            Ok(0)
        }
        Command::Spacetime { model, op, r, t0, out } => {
            let m = parse_model(&model)?;
            match op.as_str() {
                "tau" => {
                    let mut table = Table::new(&["r", "tau"]);
                    for &x in &r {
                        table.push_floats(&[x, spacetime_tau(&m, x)?]);
                    }
                    emit_csv(&out, &table)?;
                    Ok(0)
                }
                "cone" => {
                    if r.is_empty() {
                        return Err(Error::InvalidParameter(
                            "cone needs --r R0 [R...]: the emission radius then targets".into(),
                        ));
                    }
                    let cone = light_cone(&m, t0, r[0])?;
                    let mut table = Table::new(&["r", "t_past", "t_future"]);
                    for &x in &r {
                        let tau = spacetime_tau(&m, x)?;
                        let dt = (tau - cone.tau0).abs();
                        table.push_floats(&[x, t0 - dt, t0 + dt]);
                    }
                    emit_csv(&out, &table)?;
                    Ok(0)
                }
                "regime" | "taylor" => {
                    let SpacetimeModel::ReissnerNordstrom { m: mm, e } = m else {
                        return Err(Error::InvalidParameter(format!(
                            "{op} applies to rn:M:E models only"
                        )));
                    };
                    #[derive(Serialize)]
                    struct RnPoint {
                        r: f64,
                        branch: u8,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        taylor_ratio: Option<f64>,
                    }
                    let mut pts = Vec::new();
                    for &x in &r {
                        let branch = rn_regime(mm, e, x)?;
                        let taylor_ratio = if op == "taylor" {
                            Some(origin_taylor_ratio(mm, e, x)?)
                        } else {
                            None
                        };
                        pts.push(RnPoint { r: x, branch, taylor_ratio });
                    }
                    emit(&out, &pts)?;
                    Ok(0)
                }
                other => Err(Error::InvalidParameter(format!("unknown spacetime op '{other}'"))),
            }
        }
        Command::Uncertainty { n1, n2, min, out } => match (n1, n2, min) {
            (Some(a), Some(b), None) => {
                let v = uncertainty(a, b)?;
                #[derive(Serialize)]
                struct Rat {
                    num: i128,
                    den: i128,
                }
                let rat = Rat { num: *v.numer(), den: *v.denom() };
                // Exact machine-readable contract: one compact line.
                let line = serde_json::to_string(&rat)?;
                match &out.out {
                    Some(path) => std::fs::write(path, format!("{line}\n"))?,
                    None => println!("{line}"),
                }
                Ok(0)
            }
            (None, None, Some(n_max)) => {
                let m = uncertainty_minimum(n_max)?;
                #[derive(Serialize)]
                struct MinReport {
                    n1: u32,
                    n2: u32,
                    num: i128,
                    den: i128,
                    matches_claimed_minimum: bool,
                }
                emit(
                    &out,
                    &MinReport {
                        n1: m.n1,
                        n2: m.n2,
                        num: *m.value.numer(),
                        den: *m.value.denom(),
                        matches_claimed_minimum: m.matches_claimed_minimum,
                    },
                )?;
                Ok(0)
            }
            _ => Err(Error::InvalidParameter(
                "give either --n1 A --n2 B or --min N".into(),
            )),
        },
        Command::SelfAdjoint { n, alpha, out } => {
            let rep = self_adjointness_feasible(n, alpha)?;
            emit(&out, &rep)?;
            Ok(if rep.feasible { 0 } else { 2 })
        }
    }
}

fn parse_rho(spec: &str) -> Result<Box<dyn Fn(f64) -> f64>, Error> {
    if spec == "zero" {
        return Ok(Box::new(|_| 0.0));
    }
    if spec == "one" {
        return Ok(Box::new(|_| 1.0));
    }
    if let Some(k) = spec.strip_prefix("sin:") {
        let k: f64 = k
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rho spec '{spec}'")))?;
        return Ok(Box::new(move |tau| (k * std::f64::consts::PI * tau).sin()));
    }
    if let Some(rest) = spec.strip_prefix("bump:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if let [c, w] = parts.as_slice() {
            let (c, w): (f64, f64) = (
                c.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad rho spec '{spec}'")))?,
                w.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad rho spec '{spec}'")))?,
            );
            let pulse = Pulse::new(c, w);
            return Ok(Box::new(move |tau| pulse.eval(tau)));
        }
    }
    Err(Error::InvalidParameter(format!(
        "unknown rho spec '{spec}' (expected zero, one, sin:K or bump:C:W)"
    )))
}

/// Per-check verdict inside a simulate run.
#[derive(Serialize)]
struct CheckReport {
    check: String,
    pass: bool,
    worst_value: f64,
    tol: f64,
}

fn simulate(path: &Path) -> Result<i32, Error> {
    let file = ScenarioFile::from_path(path)?;
    let sc = file.to_wave_scenario()?;
    let outcome = run_wave(&sc)?;
    let dir: PathBuf = std::env::var("RCNWAVE_OUT")
        .ok()
        .or_else(|| file.outputs.as_ref().map(|o| o.dir.clone()))
        .unwrap_or_else(|| "out".to_string())
        .into();
    std::fs::create_dir_all(&dir)?;
    // Final snapshot with the staggered velocity estimate.
    let mut snapshot = Table::new(&["r", "tau", "u", "ut"]);
    for i in 0..outcome.u.len() {
        let ut = (outcome.u[i] - outcome.u_prev[i]) / outcome.dt;
        snapshot.push_floats(&[outcome.grid.rs[i], outcome.grid.taus[i], outcome.u[i], ut]);
    }
    snapshot.write_csv(std::fs::File::create(dir.join("snapshot_final.csv"))?)?;
    let mut energies = Table::new(&["t", "E_total", "E_kinetic", "E_gradient", "E_potential"]);
    for e in &outcome.energy {
        energies.push_floats(&[e.t, e.energy, e.kinetic, e.gradient, e.potential]);
    }
    energies.write_csv(std::fs::File::create(dir.join("energy.csv"))?)?;
    let mut reports = Vec::new();
    for check in &file.checks {
        let rep = match check {
            CheckSpec::Cone { speed, tol } => {
                let cone = verify_cone(
                    &sc,
                    &outcome,
                    &ConeSpec { speed: *speed, pad_cells: 2, check_lower: true, check_upper: true },
                );
                CheckReport {
                    check: "cone".into(),
                    pass: cone.relative_leak <= *tol,
                    worst_value: cone.relative_leak,
                    tol: *tol,
                }
            }
            CheckSpec::Silo { tol } => {
                // Check the side that faces away from the horizon: signals
                // climbing out must stay inside the unit-speed cone.
                use crate::potential::EndpointKind;
                let horizon_below = sc.potential.inner_end() == EndpointKind::InfiniteTau;
                let cone = verify_cone(
                    &sc,
                    &outcome,
                    &ConeSpec {
                        speed: 1.0,
                        pad_cells: 2,
                        check_lower: !horizon_below,
                        check_upper: horizon_below,
                    },
                );
                CheckReport {
                    check: "silo".into(),
                    pass: cone.relative_leak <= *tol,
                    worst_value: cone.relative_leak,
                    tol: *tol,
                }
            }
            CheckSpec::Energy { tol } => {
                let drift = energy_drift(&outcome);
                CheckReport { check: "energy".into(), pass: drift <= *tol, worst_value: drift, tol: *tol }
            }
        };
        reports.push(rep);
    }
    write_json(std::fs::File::create(dir.join("checks.json"))?, &reports)?;
    let mut status = std::fs::File::create(dir.join("run.json"))?;
    #[derive(Serialize)]
    struct RunSummary {
        steps: usize,
        dt: f64,
        peak_initial: f64,
        checks_passed: bool,
    }
    let ok = reports.iter().all(|r| r.pass);
    write_json(
        &mut status,
        &RunSummary { steps: outcome.steps, dt: outcome.dt, peak_initial: outcome.peak_initial, checks_passed: ok },
    )?;
    Ok(if ok { 0 } else { 2 })
}
