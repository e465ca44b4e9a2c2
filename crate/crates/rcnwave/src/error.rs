//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong outside of plain I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A radius (or tau value) fell outside the validity domain of a potential
    /// or chart.
    #[error("{what} = {value} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// `1/sqrt(q)` (or `1/q` for a black-hole chart) fails to be integrable at
    /// the requested endpoint, so no finite tau exists there.
    #[error("tau integral diverges at endpoint r = {endpoint}")]
    NonIntegrableAtEndpoint { endpoint: f64 },

    /// A chart table lost strict monotonicity (degenerate sampling).
    #[error("tau chart is not strictly monotone near r = {r}")]
    NotMonotone { r: f64 },

    /// The weight `w = q^{3/4} sigma tau` vanished where its logarithmic
    /// derivative was requested.
    #[error("weight w vanishes at r = {r}; log-derivative undefined")]
    ZeroW { r: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed to converge on [{a}, {b}] (estimate {estimate}, error {error})")]
    QuadratureNoConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    /// The radius sits between the two horizons of a Reissner-Nordstrom
    /// spacetime (or exactly on a horizon) where `q` is not positive.
    #[error("r = {r} is on or between horizons; q is not positive there")]
    OnHorizon { r: f64 },

    /// A cutoff family leaves part of the window uncovered.
    #[error("cutoff family leaves [{lo}, {hi}] uncovered")]
    CoverageGap { lo: f64, hi: f64 },

    /// The stiffness form for the Dirichlet solve was not positive definite.
    #[error("Dirichlet form indefinite: nonpositive pivot {pivot} at row {row}")]
    IndefiniteForm { row: usize, pivot: f64 },

    /// A wave run exceeded the blow-up threshold.
    #[error("wave amplitude {amplitude} exceeded blow-up threshold at t = {t}")]
    BlowUp { t: f64, amplitude: f64 },

    /// A scenario file or CLI request failed validation.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A numeric parameter was rejected.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Failure writing a report or reading a scenario file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a scenario file or report sink.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code for CLI reporting: usage/schema problems are 1, violated
    /// mathematical conditions are 2, numerical failures are 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidScenario(_) | Error::InvalidParameter(_) => 1,
            Error::OutOfDomain { .. }
            | Error::NonIntegrableAtEndpoint { .. }
            | Error::OnHorizon { .. }
            | Error::CoverageGap { .. }
            | Error::IndefiniteForm { .. }
            | Error::ZeroW { .. } => 2,
            Error::NotMonotone { .. }
            | Error::QuadratureNoConvergence { .. }
            | Error::BlowUp { .. }
            | Error::Io(_) => 3,
            Error::Json(_) => 1,
        }
    }
}
