//! Per-shot sampling probabilities for one configuration at one phase.
//!
//! Recombining topologies (Mach-Zehnder, A-B ring) unravel a detector of
//! overlap `c` as a mixture: with probability `1 − |c|` it records the path
//! (exactly one click), otherwise it records nothing and the quanton stays a
//! wave carrying the phase `arg c`. Averaged over shots this reproduces the
//! entangled intensity `|b1|² + |b2|² + 2·Re(c·b1*·b2)`.
//!
//! Arrival probabilities are intensities divided by the configuration's
//! intensity scale, so `scale · arrivals / n` estimates the closed-form
//! collector current.

use crate::experiments::config::{ExperimentConfig, Topology};
use crate::Complex;

use super::PhysicalModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Clicks {
    /// Detectors switched off.
    Silent,
    /// One detector fires, on the sampled path, when a record is made.
    Exclusive,
    /// Both detectors respond on every shot.
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ShotPlan {
    pub clicks: Clicks,
    /// Biprism: arms end on their own detectors; arrival means reaching `D_t`.
    pub terminal: bool,
    /// Probability that the detector makes a which-path record.
    pub record: f64,
    pub path1: f64,
    /// Arrival probability after a record on path 1 / path 2.
    pub arrive_after_record: [f64; 2],
    /// Arrival probability when no record is made.
    pub arrive_wave: f64,
    /// Eraser post-selection is active.
    pub eraser: bool,
    /// Probability of the symmetric eraser outcome for a recorded arrival.
    pub symmetric_after_record: f64,
}

impl ShotPlan {
    pub fn new(cfg: &ExperimentConfig, model: PhysicalModel, theta: f64) -> Self {
        let a1 = cfg.alpha;
        let a2 = 1.0;
        let weight = a1 * a1 + a2 * a2;
        let path1 = a1 * a1 / weight;

        let clicks = match (cfg.detectors_on, model) {
            (false, _) => Clicks::Silent,
            (true, PhysicalModel::ClassicalField) => Clicks::Both,
            (true, _) => Clicks::Exclusive,
        };

        if cfg.topology == Topology::Biprism {
            return Self {
                clicks,
                terminal: true,
                record: if clicks == Clicks::Exclusive { 1.0 } else { 0.0 },
                path1,
                arrive_after_record: [0.0, 1.0],
                arrive_wave: 1.0 - path1,
                eraser: false,
                symmetric_after_record: 0.5,
            };
        }

        let scale = cfg.intensity_scale();
        let one = Complex::new(1.0, 0.0);
        let barrier = cfg.barriers();
        let t = [barrier[0].unwrap_or(one), barrier[1].unwrap_or(one)];
        let b1 = t[0] * a1;
        let b2 = t[1] * Complex::from_polar(a2, theta);

        let (w, phase) = match (cfg.detectors_on, model) {
            (false, _) | (true, PhysicalModel::ClassicalField) => (1.0, 0.0),
            (true, _) => {
                let c = cfg.detector_overlap;
                let phase = if c == Complex::new(0.0, 0.0) { 0.0 } else { c.arg() };
                (c.norm().min(1.0), phase)
            }
        };
        let coherent = (b1 + Complex::from_polar(1.0, phase) * b2).norm_sqr();
        let direct = b1.norm_sqr() + b2.norm_sqr();

        // A recorded quanton still has to pass the recombining junction,
        // which accepts weight / scale of an incoherent arrival.
        let junction = weight / scale;
        let passes = |k: usize| match model {
            PhysicalModel::OrthodoxParticle if barrier[k].is_some() => 0.0,
            _ => 1.0,
        };
        let arrive_after_record = [
            passes(0) * t[0].norm_sqr() * junction,
            passes(1) * t[1].norm_sqr() * junction,
        ];
        let symmetric_after_record = match model {
            PhysicalModel::UnitaryQm if direct > 0.0 => 0.5 * coherent / direct,
            _ => 0.5,
        };

        Self {
            clicks,
            terminal: false,
            record: if clicks == Clicks::Exclusive { 1.0 - w } else { 0.0 },
            path1,
            arrive_after_record,
            arrive_wave: (coherent / scale).min(1.0),
            eraser: cfg.slit_open,
            symmetric_after_record,
        }
    }
}
