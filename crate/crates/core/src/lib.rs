//! Simulation of two-path *welcher weg* interferometers.
//!
//! The crate covers the closed-form intensity algebra of a two-arm
//! interferometer with an Aharonov-Bohm phase, the entanglement of a
//! which-path detector with the quanton, collapse and quantum erasure,
//! the duality bound `P² + V² ≤ 1`, a small projector algebra used to decide
//! whether wave and particle observables are complementary, and a seeded
//! single-quanton Monte Carlo engine whose statistics are checked against the
//! closed forms.
//!
//! Module map:
//!
//! - [`hilbert`]: dense complex vectors and matrices on small spaces.
//! - [`interferometer`]: screen intensity, fringe extrema, visibility,
//!   modulation, predictability and the duality point.
//! - [`detector`]: detector coupling, entangled intensity, collapse, erasure.
//! - [`complementarity`]: the biprism and Mach-Zehnder projector scenarios.
//! - [`montecarlo`]: shot-level sampling, phase sweeps, visibility fits.
//! - [`experiments`]: configurations, closed-form predictions, CSV/JSON output.

#![forbid(unsafe_code)]

pub mod complementarity;
pub mod detector;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod interferometer;
pub mod montecarlo;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Slack allowed on `|c| ≤ 1`-type bounds so that values produced by
/// `from_polar(1.0, φ)` are not rejected over a rounding ulp.
pub const UNIT_BOUND_SLACK: f64 = 1e-12;
