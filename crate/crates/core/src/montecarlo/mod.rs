//! Seeded single-quanton shot simulation.
//!
//! # Random streams
//!
//! Every shot draws exactly [`WORDS_PER_SHOT`] 32-bit words from a ChaCha8
//! generator keyed by `ChaCha8Rng::seed_from_u64(seed)`. Phase-grid point `i`
//! uses stream `i` (a single run uses stream 0) and shot `k` starts at word
//! `k · WORDS_PER_SHOT`. A shot's randomness therefore depends only on
//! `(seed, stream, k)`, and chunks of shots can be simulated in any order or
//! in parallel with bit-identical totals.

mod fit;
mod plan;

use std::fmt;
use std::ops::{Add, Range};
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fit::{fit_cosine, visibility_from_fit, CosineFit, VisibilityEstimate, MIN_SPAN};

use crate::experiments::config::ExperimentConfig;
use crate::{Error, Result};
use plan::{Clicks, ShotPlan};

/// 32-bit words consumed per shot, used or not.
pub const WORDS_PER_SHOT: u64 = 4;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhysicalModel {
    /// Unitary evolution with entangling detectors; Born-rule sampling.
    #[serde(rename = "unitary-qm")]
    UnitaryQm,
    /// A quanton registered by a path detector becomes a particle and cannot
    /// tunnel through a barrier afterwards.
    #[serde(rename = "orthodox-particle")]
    OrthodoxParticle,
    /// Contrast model: a classical field that splits, triggers both path
    /// detectors on every shot, and keeps interfering.
    #[serde(rename = "classical-field")]
    ClassicalField,
}

impl PhysicalModel {
    pub const ALL: [PhysicalModel; 3] = [
        PhysicalModel::UnitaryQm,
        PhysicalModel::OrthodoxParticle,
        PhysicalModel::ClassicalField,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PhysicalModel::UnitaryQm => "unitary-qm",
            PhysicalModel::OrthodoxParticle => "orthodox-particle",
            PhysicalModel::ClassicalField => "classical-field",
        }
    }
}

impl fmt::Display for PhysicalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhysicalModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('_', "-").as_str() {
            "unitary-qm" => Ok(PhysicalModel::UnitaryQm),
            "orthodox-particle" => Ok(PhysicalModel::OrthodoxParticle),
            "classical-field" => Ok(PhysicalModel::ClassicalField),
            _ => Err(format!(
                "unknown model {s:?} (expected unitary-qm, orthodox-particle or classical-field)"
            )),
        }
    }
}

/// Which eraser outcome a post-selected arrival belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EraserLabel {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotOutcome {
    pub click1: bool,
    pub click2: bool,
    pub arrived: bool,
    /// Phase-grid index of an arrival.
    pub screen_phase_bin: Option<usize>,
    /// Eraser outcome of an arrival when the slit is open.
    pub eraser: Option<EraserLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: u64,
    pub clicks1: u64,
    pub clicks2: u64,
    pub coincidences: u64,
    /// `1 − coincidences / max(shots with any click, 1)`.
    pub anticoincidence_rate: f64,
    pub arrivals: u64,
    /// `arrivals / n`.
    pub collector_rate: f64,
}

impl RunSummary {
    pub fn coincidence_rate(&self) -> f64 {
        1.0 - self.anticoincidence_rate
    }

    /// Collector current in closed-form intensity units, with its binomial
    /// standard error.
    pub fn collector_current(&self, intensity_scale: f64) -> (f64, f64) {
        let p = self.collector_rate;
        let se = (p * (1.0 - p) / self.n as f64).sqrt();
        (intensity_scale * p, intensity_scale * se)
    }
}

/// Eraser bins, halved so that `fringe + antifringe = unconditioned` per bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EraserBins {
    pub fringe: Vec<f64>,
    pub fringe_stderr: Vec<f64>,
    pub antifringe: Vec<f64>,
    pub antifringe_stderr: Vec<f64>,
    pub unconditioned: Vec<f64>,
    pub unconditioned_stderr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeData {
    pub theta_grid: Vec<f64>,
    /// Collector intensity per phase; with the slit open, the symmetric
    /// post-selected intensity normalized like `erase(Φ, 1, 1)`.
    pub mean_intensity: Vec<f64>,
    pub stderr: Vec<f64>,
    pub visibility_estimate: f64,
    pub visibility_stderr: f64,
    /// No usable visibility (grid too small to fit, or fitted offset ≤ 0).
    pub fit_degenerate: bool,
    pub eraser: Option<EraserBins>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    shots: u64,
    clicks1: u64,
    clicks2: u64,
    coincidences: u64,
    clicked: u64,
    arrivals: u64,
    symmetric: u64,
    antisymmetric: u64,
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            shots: self.shots + o.shots,
            clicks1: self.clicks1 + o.clicks1,
            clicks2: self.clicks2 + o.clicks2,
            coincidences: self.coincidences + o.coincidences,
            clicked: self.clicked + o.clicked,
            arrivals: self.arrivals + o.arrivals,
            symmetric: self.symmetric + o.symmetric,
            antisymmetric: self.antisymmetric + o.antisymmetric,
        }
    }
}

impl Tally {
    fn record(&mut self, s: &ShotOutcome) {
        self.shots += 1;
        self.clicks1 += s.click1 as u64;
        self.clicks2 += s.click2 as u64;
        self.coincidences += (s.click1 && s.click2) as u64;
        self.clicked += (s.click1 || s.click2) as u64;
        self.arrivals += s.arrived as u64;
        match s.eraser {
            Some(EraserLabel::Symmetric) => self.symmetric += 1,
            Some(EraserLabel::Antisymmetric) => self.antisymmetric += 1,
            None => {}
        }
    }
}

fn stream_rng(seed: u64, stream: u64, first_shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(first_shot) * u128::from(WORDS_PER_SHOT));
    rng
}

/// Uniform in the open interval (0, 1).
#[inline]
fn unit(word: u32) -> f64 {
    (f64::from(word) + 0.5) * (1.0 / 4_294_967_296.0)
}

fn simulate(plan: &ShotPlan, rng: &mut ChaCha8Rng, bin: usize) -> ShotOutcome {
    let u = [
        unit(rng.next_u32()),
        unit(rng.next_u32()),
        unit(rng.next_u32()),
        unit(rng.next_u32()),
    ];
    let (mut click1, mut click2) = match plan.clicks {
        Clicks::Both => (true, true),
        _ => (false, false),
    };
    let arrived;
    let mut symmetric = true;
    if plan.terminal {
        let on_path1 = u[1] < plan.path1;
        if plan.clicks == Clicks::Exclusive {
            click1 = on_path1;
            click2 = !on_path1;
        }
        arrived = !on_path1;
    } else if u[0] < plan.record {
        let path = if u[1] < plan.path1 { 0 } else { 1 };
        click1 = path == 0;
        click2 = path == 1;
        arrived = u[2] < plan.arrive_after_record[path];
        symmetric = u[3] < plan.symmetric_after_record;
    } else {
        arrived = u[2] < plan.arrive_wave;
    }
    let eraser = (plan.eraser && arrived).then_some(if symmetric {
        EraserLabel::Symmetric
    } else {
        EraserLabel::Antisymmetric
    });
    ShotOutcome {
        click1,
        click2,
        arrived,
        screen_phase_bin: arrived.then_some(bin),
        eraser,
    }
}

fn tally_shots(plan: &ShotPlan, seed: u64, stream: u64, n: u64) -> Tally {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut rng = stream_rng(seed, stream, start);
            let mut t = Tally::default();
            for _ in start..end {
                t.record(&simulate(plan, &mut rng, stream as usize));
            }
            t
        })
        .reduce(Tally::default, Add::add)
}

/// Individual shot records for shots `range` on stream `stream` at phase
/// `theta`. The same shots are aggregated by [`run_shots`] (stream 0) and
/// [`sweep_phase`] (stream = grid index).
pub fn sample_shots(
    config: &ExperimentConfig,
    model: PhysicalModel,
    theta: f64,
    stream: u64,
    range: Range<u64>,
    seed: u64,
) -> Result<Vec<ShotOutcome>> {
    config.validate()?;
    let plan = ShotPlan::new(config, model, theta);
    let mut rng = stream_rng(seed, stream, range.start);
    Ok(range.map(|_| simulate(&plan, &mut rng, stream as usize)).collect())
}

/// Simulate `n` shots at the configuration's phase (the first point of a
/// sweep).
pub fn run_shots(
    config: &ExperimentConfig,
    model: PhysicalModel,
    n: u64,
    seed: u64,
) -> Result<RunSummary> {
    if n == 0 {
        return Err(Error::NoShots);
    }
    config.validate()?;
    let plan = ShotPlan::new(config, model, config.theta.representative());
    let t = tally_shots(&plan, seed, 0, n);
    Ok(RunSummary {
        n,
        clicks1: t.clicks1,
        clicks2: t.clicks2,
        coincidences: t.coincidences,
        anticoincidence_rate: 1.0 - t.coincidences as f64 / t.clicked.max(1) as f64,
        arrivals: t.arrivals,
        collector_rate: t.arrivals as f64 / n as f64,
    })
}

/// Binomial mean and standard error of `count / n`, scaled.
fn scaled_rate(count: u64, n: u64, scale: f64) -> (f64, f64) {
    let p = count as f64 / n as f64;
    (scale * p, scale * (p * (1.0 - p) / n as f64).sqrt())
}

/// Simulate `n_per_point` shots at every phase of `theta_grid`.
pub fn sweep_phase(
    config: &ExperimentConfig,
    model: PhysicalModel,
    theta_grid: &[f64],
    n_per_point: u64,
    seed: u64,
) -> Result<FringeData> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidGrid("phase grid is empty".into()));
    }
    if n_per_point == 0 {
        return Err(Error::NoShots);
    }
    config.validate()?;
    let scale = config.intensity_scale();
    let tallies: Vec<Tally> = theta_grid
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let plan = ShotPlan::new(config, model, theta);
            tally_shots(&plan, seed, i as u64, n_per_point)
        })
        .collect();

    let n = n_per_point;
    let column = |f: &dyn Fn(&Tally) -> u64, k: f64| -> (Vec<f64>, Vec<f64>) {
        tallies.iter().map(|t| scaled_rate(f(t), n, k)).unzip()
    };
    let (mean_intensity, stderr, eraser) = if config.slit_open {
        let (fringe, fringe_stderr) = column(&|t| t.symmetric, scale);
        let (antifringe, antifringe_stderr) = column(&|t| t.antisymmetric, scale);
        let (unconditioned, unconditioned_stderr) = column(&|t| t.arrivals, scale);
        let (signal, signal_stderr) = column(&|t| t.symmetric, 2.0 * scale);
        (
            signal,
            signal_stderr,
            Some(EraserBins {
                fringe,
                fringe_stderr,
                antifringe,
                antifringe_stderr,
                unconditioned,
                unconditioned_stderr,
            }),
        )
    } else {
        let (m, s) = column(&|t| t.arrivals, scale);
        (m, s, None)
    };

    let mut data = FringeData {
        theta_grid: theta_grid.to_vec(),
        mean_intensity,
        stderr,
        visibility_estimate: 0.0,
        visibility_stderr: 0.0,
        fit_degenerate: true,
        eraser,
    };
    if let Ok(est) = estimate_visibility(&data) {
        if !est.degenerate {
            data.visibility_estimate = est.value;
            data.visibility_stderr = est.stderr;
            data.fit_degenerate = false;
        }
    }
    Ok(data)
}

/// Cosine least-squares visibility of the primary intensity series.
pub fn estimate_visibility(f: &FringeData) -> Result<VisibilityEstimate> {
    let fit = fit_cosine(&f.theta_grid, &f.mean_intensity, &f.stderr)?;
    Ok(visibility_from_fit(fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{ExperimentConfig, Topology};
    use crate::Complex;
    use std::f64::consts::{PI, TAU};

    fn ring(detectors_on: bool) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(Topology::AbRing);
        c.detectors_on = detectors_on;
        c
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|k| TAU * k as f64 / n as f64).collect()
    }

    #[test]
    fn zero_shots_and_empty_grid_rejected() {
        let c = ring(true);
        assert!(matches!(run_shots(&c, PhysicalModel::UnitaryQm, 0, 1), Err(Error::NoShots)));
        assert!(matches!(
            sweep_phase(&c, PhysicalModel::UnitaryQm, &[], 10, 1),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn unitary_detectors_never_coincide() {
        let s = run_shots(&ring(true), PhysicalModel::UnitaryQm, 100_000, 3).unwrap();
        assert_eq!(s.coincidences, 0);
        assert_eq!(s.anticoincidence_rate, 1.0);
        assert_eq!(s.clicks1 + s.clicks2, s.n);
    }

    #[test]
    fn orthodox_barriers_block_everything() {
        let mut c = ring(true);
        c.barrier_transmission = Some(Complex::new(0.6, 0.0));
        for seed in 0..5 {
            let s = run_shots(&c, PhysicalModel::OrthodoxParticle, 20_000, seed).unwrap();
            assert_eq!(s.arrivals, 0);
            assert_eq!(s.collector_rate, 0.0);
        }
    }

    #[test]
    fn classical_field_always_coincides() {
        let s = run_shots(&ring(true), PhysicalModel::ClassicalField, 1000, 9).unwrap();
        assert_eq!(s.coincidences, 1000);
        assert_eq!(s.coincidence_rate(), 1.0);
    }

    #[test]
    fn chunking_does_not_change_results() {
        // one long sequential pass vs. the chunked parallel tally
        let mut c = ring(true);
        c.detector_overlap = Complex::new(0.3, 0.2);
        c.alpha = 0.7;
        let n = 3 * CHUNK + 17;
        let shots = sample_shots(&c, PhysicalModel::UnitaryQm, 0.0, 0, 0..n, 42).unwrap();
        let mut t = Tally::default();
        shots.iter().for_each(|s| t.record(s));
        let s = run_shots(&c, PhysicalModel::UnitaryQm, n, 42).unwrap();
        assert_eq!((s.clicks1, s.clicks2, s.arrivals), (t.clicks1, t.clicks2, t.arrivals));
        // a window taken from the middle matches the same shots of the full pass
        let window = sample_shots(&c, PhysicalModel::UnitaryQm, 0.0, 0, 1000..1010, 42).unwrap();
        assert_eq!(&window[..], &shots[1000..1010]);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let mut c = ring(true);
        c.slit_open = true;
        let g = grid(8);
        let a = sweep_phase(&c, PhysicalModel::UnitaryQm, &g, 5000, 77).unwrap();
        let b = sweep_phase(&c, PhysicalModel::UnitaryQm, &g, 5000, 77).unwrap();
        assert_eq!(a, b);
        let d = sweep_phase(&c, PhysicalModel::UnitaryQm, &g, 5000, 78).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn eraser_bins_sum_to_unconditioned() {
        let mut c = ring(true);
        c.slit_open = true;
        c.alpha = 0.6;
        let f = sweep_phase(&c, PhysicalModel::UnitaryQm, &grid(16), 20_000, 5).unwrap();
        let e = f.eraser.as_ref().unwrap();
        for i in 0..16 {
            let s = e.fringe[i] + e.antifringe[i];
            let tol = 4.0 * e.unconditioned_stderr[i].max(1e-12);
            assert!((s - e.unconditioned[i]).abs() <= tol);
        }
    }

    #[test]
    fn screen_bins_and_exclusivity_per_shot() {
        let mut c = ring(true);
        c.detector_overlap = Complex::new(0.5, 0.0);
        for model in [PhysicalModel::UnitaryQm, PhysicalModel::OrthodoxParticle] {
            for s in sample_shots(&c, model, PI / 3.0, 5, 0..20_000, 1).unwrap() {
                assert!(!(s.click1 && s.click2));
                assert_eq!(s.screen_phase_bin, s.arrived.then_some(5));
            }
        }
    }

    #[test]
    fn model_names_round_trip() {
        for m in PhysicalModel::ALL {
            assert_eq!(m.as_str().parse::<PhysicalModel>().unwrap(), m);
        }
        assert_eq!("orthodox_particle".parse::<PhysicalModel>().unwrap(), PhysicalModel::OrthodoxParticle);
        assert!("bohmian".parse::<PhysicalModel>().is_err());
    }
}
