use thiserror::Error;

use crate::experiments::config::ConfigViolation;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("vectors are linearly dependent (residual norm {0:.3e})")]
    RankDeficient(f64),

    #[error("matrix is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("both interferometer paths are closed")]
    NoQuanton,

    #[error("{name} = {value} is out of range ({range})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("visibility undefined: maximum intensity is zero")]
    UndefinedVisibility,

    #[error("operation requires orthogonal detector states, got overlap {0}")]
    NonOrthogonalDetector(crate::Complex),

    #[error("erasure basis vector is zero")]
    ZeroErasureBasis,

    #[error("shot count must be at least 1")]
    NoShots,

    #[error("{0}")]
    InvalidGrid(String),

    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("invalid configuration:\n{}", format_violations(.0))]
    Config(Vec<ConfigViolation>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[ConfigViolation]) -> String {
    v.iter()
        .map(|x| format!("  {x}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
