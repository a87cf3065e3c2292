//! Experiment configurations, closed-form predictions and output formats.

pub mod config;
pub mod emit;
pub mod predict;

pub use config::{load_config, resolve_seed, ExperimentConfig, ThetaSpec, Topology};
pub use emit::{emit, parse_json, Emit, Format};
pub use predict::{discriminate, predict, CurrentPrediction, Discrimination, Signal};
