//! Scenario files: the JSON schema (`"rcnwave/1"`) that drives the command
//! line front end.  Unknown keys are rejected so a misspelled field fails
//! loudly instead of silently taking a default.

use crate::error::Error;
use crate::potential::RadialPotential;
use crate::wave::{Coupling, Pulse, SourceSpec, WaveScenario};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA: &str = "rcnwave/1";

/// Weight selection inside a scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Minkowski { dimension: u32 },
    PowerSingular { alpha: f64, beta: f64, dimension: u32 },
    LogSingular { delta: f64, dimension: u32 },
    PowerInfinity { alpha: f64, beta: f64, dimension: u32 },
    Schwarzschild { m: f64, c: f64 },
    DeSitter { ell: f64 },
    ReissnerNordstrom { m: f64, e: f64, r_probe: f64 },
    Coulomb,
    SpectrumHydrogen { level: u32 },
    CustomTable { points: Vec<(f64, f64)>, dimension: u32 },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<RadialPotential, Error> {
        match self {
            PotentialSpec::Minkowski { dimension } => Ok(RadialPotential::minkowski(*dimension)),
            PotentialSpec::PowerSingular { alpha, beta, dimension } => {
                RadialPotential::power_singular(*alpha, *beta, *dimension)
            }
            PotentialSpec::LogSingular { delta, dimension } => {
                RadialPotential::log_singular(*delta, *dimension)
            }
            PotentialSpec::PowerInfinity { alpha, beta, dimension } => {
                RadialPotential::power_infinity(*alpha, *beta, *dimension)
            }
            PotentialSpec::Schwarzschild { m, c } => RadialPotential::schwarzschild(*m, *c),
            PotentialSpec::DeSitter { ell } => RadialPotential::de_sitter(*ell),
            PotentialSpec::ReissnerNordstrom { m, e, r_probe } => {
                RadialPotential::reissner_nordstrom(*m, *e, *r_probe)
            }
            PotentialSpec::Coulomb => Ok(RadialPotential::coulomb()),
            PotentialSpec::SpectrumHydrogen { level } => {
                RadialPotential::spectrum_hydrogen(*level)
            }
            PotentialSpec::CustomTable { points, dimension } => {
                RadialPotential::custom_table(points.clone(), *dimension)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// "r" or "tau"; both are evolved on the uniform-tau grid of the chart
    /// (the conservative stencil is formulated in tau), so this records the
    /// coordinate in which `lo`/`hi` are given.
    pub coordinate: String,
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_end: f64,
    pub cfl_fraction: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub shape: String,
    pub center: f64,
    pub width: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

fn default_amplitude() -> f64 {
    1.0
}

impl ProfileSpec {
    fn to_pulse(&self) -> Result<Pulse, Error> {
        if self.shape != "bump" {
            return Err(Error::InvalidScenario(format!(
                "unsupported initial profile shape '{}' (only 'bump')",
                self.shape
            )));
        }
        Ok(Pulse { center: self.center, width: self.width, amplitude: self.amplitude })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub u0: ProfileSpec,
    #[serde(default)]
    pub v0: Option<ProfileSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFileSpec {
    pub profile: ProfileSpec,
    pub omega: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Unit-speed cone check (optionally a deliberately wrong speed).
    Cone {
        #[serde(default = "default_speed")]
        speed: f64,
        tol: f64,
    },
    /// One-sided large-tau (horizon-facing) cone check.
    Silo { tol: f64 },
    /// Relative drift bound on the conserved discrete energy.
    Energy { tol: f64 },
}

fn default_speed() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    #[serde(default)]
    pub snapshot_every: Option<usize>,
}

/// A full scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    pub potential: PotentialSpec,
    /// Whether the attractive potential `V = -q` is switched on.
    #[serde(default = "default_true")]
    pub v_minus_equals_q: bool,
    pub grid: GridSpec,
    pub time: TimeSpec,
    pub initial: InitialSpec,
    #[serde(default)]
    pub source: Option<SourceFileSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub outputs: Option<OutputSpec>,
}

fn default_true() -> bool {
    true
}

impl ScenarioFile {
    pub fn from_str(text: &str) -> Result<Self, Error> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.schema != SCHEMA {
            return Err(Error::InvalidScenario(format!(
                "schema must be \"{SCHEMA}\", got \"{}\"",
                self.schema
            )));
        }
        if self.grid.coordinate != "r" && self.grid.coordinate != "tau" {
            return Err(Error::InvalidScenario(format!(
                "grid.coordinate must be \"r\" or \"tau\", got \"{}\"",
                self.grid.coordinate
            )));
        }
        if !(self.grid.lo.is_finite() && self.grid.hi.is_finite() && self.grid.lo < self.grid.hi)
        {
            return Err(Error::InvalidScenario(format!(
                "grid bounds must be finite with lo < hi, got [{}, {}]",
                self.grid.lo, self.grid.hi
            )));
        }
        Ok(())
    }

    pub fn coupling(&self) -> Coupling {
        if self.v_minus_equals_q {
            Coupling::AttractiveQ
        } else {
            Coupling::None
        }
    }

    pub fn build_potential(&self) -> Result<RadialPotential, Error> {
        self.potential.build()
    }

    /// The radial window of the grid: `lo`/`hi` given in r directly, or in
    /// tau measured from the inner domain edge (horizon-side bounds use
    /// [`WaveScenario::black_hole_slab`] instead).
    pub fn radial_window(&self) -> Result<(f64, f64), Error> {
        let p = self.build_potential()?;
        if self.grid.coordinate == "r" {
            Ok((self.grid.lo, self.grid.hi))
        } else {
            // tau measured from the lower domain edge (or from `lo` itself
            // when the edge is a horizon: then lo/hi are radii after all).
            let (dom_lo, _) = p.domain();
            use crate::potential::EndpointKind;
            if p.inner_end() == EndpointKind::InfiniteTau {
                return Err(Error::InvalidScenario(
                    "tau-coordinate bounds are anchored at the inner domain edge, \
                     which is a horizon here; give radial bounds instead"
                        .into(),
                ));
            }
            let r_lo = crate::wave::step_tau(&p, dom_lo.max(1e-300), self.grid.lo)?;
            let r_hi = crate::wave::step_tau(&p, r_lo, self.grid.hi - self.grid.lo)?;
            Ok((r_lo, r_hi))
        }
    }

    pub fn to_wave_scenario(&self) -> Result<WaveScenario, Error> {
        let p = self.build_potential()?;
        let (r_lo, r_hi) = self.radial_window()?;
        let mut sc = WaveScenario::new(
            p,
            r_lo,
            r_hi,
            self.coupling(),
            self.grid.cells,
            self.time.cfl_fraction,
            self.time.t_end,
            self.initial.u0.to_pulse()?,
        )?;
        if let Some(v0) = &self.initial.v0 {
            sc = sc.with_v0(v0.to_pulse()?);
        }
        if let Some(src) = &self.source {
            sc = sc.with_source(SourceSpec { profile: src.profile.to_pulse()?, omega: src.omega });
        }
        Ok(sc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{
            "schema": "rcnwave/1",
            "potential": {"kind": "minkowski", "dimension": 1},
            "v_minus_equals_q": false,
            "grid": {"coordinate": "r", "lo": 0.0, "hi": 8.0, "cells": 64},
            "time": {"t_end": 2.0, "cfl_fraction": 0.5},
            "initial": {"u0": {"shape": "bump", "center": 4.0, "width": 0.5}},
            "checks": [{"type": "cone", "tol": 1e-8}]
        }"#
        .to_string()
    }

    #[test]
    fn minimal_scenario_parses_and_builds() {
        let f = ScenarioFile::from_str(&minimal()).unwrap();
        assert_eq!(f.coupling(), Coupling::None);
        let sc = f.to_wave_scenario().unwrap();
        assert_eq!(sc.cells, 64);
        assert_eq!(sc.r_hi, 8.0);
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let bad = minimal().replace("\"cells\"", "\"cels\"");
        let err = ScenarioFile::from_str(&bad).unwrap_err();
        assert!(err.to_string().contains("cels"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let bad = minimal().replace("rcnwave/1", "rcnwave/2");
        assert!(ScenarioFile::from_str(&bad).is_err());
    }

    #[test]
    fn tau_coordinate_window_maps_through_the_chart() {
        let text = minimal()
            .replace(
                r#"{"kind": "minkowski", "dimension": 1}"#,
                r#"{"kind": "power_singular", "alpha": 1.0, "beta": 0.5, "dimension": 1}"#,
            )
            .replace("\"coordinate\": \"r\", \"lo\": 0.0, \"hi\": 8.0", "\"coordinate\": \"tau\", \"lo\": 0.0, \"hi\": 1.0")
            .replace("\"center\": 4.0", "\"center\": 0.5");
        let f = ScenarioFile::from_str(&text).unwrap();
        let (r_lo, r_hi) = f.radial_window().unwrap();
        // tau = r^2 / (2 beta) = r^2 for beta = 0.5, so tau = 1 -> r = 1.
        assert!(r_lo < 1e-8);
        assert!((r_hi - 1.0).abs() < 1e-8, "r_hi {r_hi}");
    }
}
