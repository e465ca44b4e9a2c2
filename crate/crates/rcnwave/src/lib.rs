//! Radial inner-time geometry for singular Schrodinger operators.
//!
//! A nonnegative radial weight `q` (the negative part of a potential) turns a
//! radial chart into an "inner time" coordinate: tau(r) is the metric length of
//! the radial segment rescaled by `1/sqrt(q)`.  Strong singularities and
//! horizons sit at infinite inner time, which is what keeps waves from reaching
//! them.  This crate provides:
//!
//! * the tau charts themselves ([`geometry`]), with completeness probes and the
//!   dual potential built from the weight `w = q^{3/4} * sigma * tau`;
//! * certification of range-control windows ([`rcn`]): two sup bounds on the
//!   dual potential and on `q*tau` that imply a positivity constant `delta < 1`
//!   for the quadratic form;
//! * quadratic-form checks ([`forms`]): Hardy inequalities, random bump
//!   positivity probes and falsification sweeps, IMS cutoff bookkeeping, and a
//!   self-adjointness feasibility test for inverse-square weights;
//! * a 1+1 leapfrog wave solver on tau or r grids ([`wave`]) with light-cone
//!   and horizon-silo verification and a Dirichlet steady-state solver;
//! * closed-form tau charts for standard spacetimes ([`spacetime`]) including
//!   all seven Reissner-Nordstrom branches and an exact-rational
//!   energy-time uncertainty product for hydrogen level pairs;
//! * a thin CLI ([`cli`]) over JSON scenario files with CSV/JSON reports.

pub mod cli;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod potential;
pub mod quadrature;
pub mod rcn;
pub mod report;
pub mod scenario;
pub mod spacetime;
pub mod wave;

pub use error::Error;
pub use potential::RadialPotential;
