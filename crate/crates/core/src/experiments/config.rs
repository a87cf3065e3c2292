//! Experiment configuration documents.
//!
//! A configuration is a flat TOML document, one experiment per file:
//!
//! ```toml
//! topology = "ab_ring"
//! alpha = 1.0
//! theta_sweep = { start = 0.0, stop = 6.283185307179586, points = 32 }
//! detectors_on = true
//! detector_overlap_re = 0.0
//! barrier_transmission_re = 0.6
//! slit_open = false
//! shots = 100000
//! seed = 7
//! model = "unitary-qm"
//! ```
//!
//! Validation collects every violation rather than stopping at the first.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use toml::{Table, Value};

use crate::detector::DetectorCoupling;
use crate::interferometer::PathPair;
use crate::montecarlo::PhysicalModel;
use crate::{Complex, Error, Result, UNIT_BOUND_SLACK};

/// Environment variable overriding the configured seed.
pub const SEED_ENV_VAR: &str = "WELCHERWEG_SEED";

pub const DEFAULT_SHOTS: u64 = 10_000;

/// Points used by `sweep` when the document only fixes `theta`.
pub const DEFAULT_SWEEP_POINTS: usize = 32;

const KNOWN_KEYS: &[&str] = &[
    "topology",
    "alpha",
    "theta",
    "theta_sweep",
    "detectors_on",
    "detector_overlap_re",
    "detector_overlap_im",
    "barrier_transmission_re",
    "barrier_transmission_im",
    "slit_open",
    "shots",
    "seed",
    "model",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Biprism,
    MachZehnder,
    AbRing,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Biprism => "biprism",
            Topology::MachZehnder => "mach_zehnder",
            Topology::AbRing => "ab_ring",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "biprism" => Ok(Topology::Biprism),
            "mach_zehnder" => Ok(Topology::MachZehnder),
            "ab_ring" => Ok(Topology::AbRing),
            other => Err(format!(
                "unknown topology {other:?} (expected biprism, mach_zehnder or ab_ring)"
            )),
        }
    }
}

/// A fixed A-B phase or an evenly spaced sweep.
///
/// Sweeps exclude the `stop` endpoint: `start + (stop − start)·k/points`
/// for `k = 0..points`, so a `[0, 2π)` sweep covers one period without
/// repeating θ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSpec {
    Fixed(f64),
    Sweep { start: f64, stop: f64, points: usize },
}

impl ThetaSpec {
    pub fn grid(&self) -> Vec<f64> {
        match *self {
            ThetaSpec::Fixed(t) => vec![t],
            ThetaSpec::Sweep {
                start,
                stop,
                points,
            } => (0..points)
                .map(|k| start + (stop - start) * k as f64 / points as f64)
                .collect(),
        }
    }

    /// The fixed phase, or the first sweep point.
    pub fn representative(&self) -> f64 {
        match *self {
            ThetaSpec::Fixed(t) => t,
            ThetaSpec::Sweep { start, .. } => start,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub topology: Topology,
    /// Arm-1 amplitude relative to arm 2 (`a1 = α`, `a2 = 1`).
    pub alpha: f64,
    pub theta: ThetaSpec,
    pub detectors_on: bool,
    pub detector_overlap: Complex,
    /// Tunnel barrier amplitude, the same in both arms. `None` means no
    /// barriers.
    pub barrier_transmission: Option<Complex>,
    pub slit_open: bool,
    pub shots: u64,
    pub seed: u64,
    pub model: PhysicalModel,
}

impl ExperimentConfig {
    pub fn new(topology: Topology) -> Self {
        Self {
            topology,
            alpha: 1.0,
            theta: ThetaSpec::Fixed(0.0),
            detectors_on: false,
            detector_overlap: Complex::new(0.0, 0.0),
            barrier_transmission: None,
            slit_open: false,
            shots: DEFAULT_SHOTS,
            seed: 0,
            model: PhysicalModel::UnitaryQm,
        }
    }

    /// All invariant violations; empty when the config is valid.
    pub fn violations(&self) -> Vec<ConfigViolation> {
        let mut out = Vec::new();
        let mut bad = |field: &str, message: String| {
            out.push(ConfigViolation {
                line: None,
                field: field.to_string(),
                message,
            })
        };
        if !(0.0..=1.0).contains(&self.alpha) {
            bad("alpha", format!("{} is outside [0, 1]", self.alpha));
        }
        match self.theta {
            ThetaSpec::Fixed(t) if !t.is_finite() => bad("theta", "must be finite".into()),
            ThetaSpec::Sweep {
                start,
                stop,
                points,
            } => {
                if !(start.is_finite() && stop.is_finite()) {
                    bad("theta_sweep", "start and stop must be finite".into());
                }
                if points == 0 {
                    bad("theta_sweep", "points must be at least 1".into());
                }
            }
            _ => {}
        }
        let c = self.detector_overlap.norm();
        if !(c <= 1.0 + UNIT_BOUND_SLACK) {
            bad("detector_overlap", format!("|c| = {c} exceeds 1"));
        }
        if let Some(t) = self.barrier_transmission {
            if !(t.norm() <= 1.0 + UNIT_BOUND_SLACK) {
                bad("barrier_transmission", format!("|t| = {} exceeds 1", t.norm()));
            }
            if self.topology != Topology::AbRing {
                bad(
                    "barrier_transmission",
                    format!("barriers are only available on ab_ring, not {}", self.topology),
                );
            }
        }
        if self.slit_open && self.topology != Topology::AbRing {
            bad(
                "slit_open",
                format!("the erasing slit is only available on ab_ring, not {}", self.topology),
            );
        }
        if self.shots == 0 {
            bad("shots", "must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    /// `(a1, a2, θ) = (α, 1, θ)`.
    pub fn path_pair(&self, theta: f64) -> PathPair {
        PathPair::real(self.alpha, 1.0, theta).expect("a2 = 1 keeps a path open")
    }

    /// Detector coupling seen by the quanton; switched-off detectors act as
    /// `c = 1`.
    pub fn effective_coupling(&self) -> DetectorCoupling {
        if self.detectors_on {
            DetectorCoupling::new(self.detector_overlap).expect("validated overlap")
        } else {
            DetectorCoupling::blind()
        }
    }

    /// Per-arm barrier amplitudes, `None` where there is no barrier.
    pub fn barriers(&self) -> [Option<Complex>; 2] {
        [self.barrier_transmission, self.barrier_transmission]
    }

    pub fn barriers_present(&self) -> bool {
        self.barrier_transmission.is_some()
    }

    /// Intensity corresponding to an arrival probability of one.
    ///
    /// Recombining topologies use the barrier-free fringe maximum
    /// `(|a1| + |a2|)²`; the biprism, whose arms end on separate detectors,
    /// uses `|a1|² + |a2|²`.
    pub fn intensity_scale(&self) -> f64 {
        match self.topology {
            Topology::Biprism => self.alpha * self.alpha + 1.0,
            _ => (self.alpha + 1.0).powi(2),
        }
    }

    /// θ grid for a sweep: the configured sweep, or a default full period.
    pub fn sweep_grid(&self) -> Vec<f64> {
        match self.theta {
            ThetaSpec::Sweep { .. } => self.theta.grid(),
            ThetaSpec::Fixed(_) => ThetaSpec::Sweep {
                start: 0.0,
                stop: TAU,
                points: DEFAULT_SWEEP_POINTS,
            }
            .grid(),
        }
    }

    /// Serialize as a configuration document that [`load_config`] reads back
    /// to an identical value.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        line("topology", format!("{:?}", self.topology.as_str()));
        line("alpha", float(self.alpha));
        match self.theta {
            ThetaSpec::Fixed(t) => line("theta", float(t)),
            ThetaSpec::Sweep {
                start,
                stop,
                points,
            } => line(
                "theta_sweep",
                format!(
                    "{{ start = {}, stop = {}, points = {points} }}",
                    float(start),
                    float(stop)
                ),
            ),
        }
        line("detectors_on", self.detectors_on.to_string());
        line("detector_overlap_re", float(self.detector_overlap.re));
        line("detector_overlap_im", float(self.detector_overlap.im));
        if let Some(t) = self.barrier_transmission {
            line("barrier_transmission_re", float(t.re));
            line("barrier_transmission_im", float(t.im));
        }
        line("slit_open", self.slit_open.to_string());
        line("shots", self.shots.to_string());
        if self.seed <= i64::MAX as u64 {
            line("seed", self.seed.to_string());
        } else {
            line("seed", format!("\"{}\"", self.seed));
        }
        line("model", format!("{:?}", self.model.as_str()));
        s
    }
}

/// Shortest round-trip decimal, always with a fractional part or exponent.
fn float(x: f64) -> String {
    format!("{x:?}")
}

/// One problem found in a configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigViolation {
    /// 1-based line of the offending key, when known.
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Parse and validate a configuration document.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let table: Table = match text.parse() {
        Ok(t) => t,
        Err(e) => {
            let e: toml::de::Error = e;
            let line = e.span().map(|s| line_of_offset(text, s.start));
            return Err(Error::Config(vec![ConfigViolation {
                line,
                field: "document".into(),
                message: e.message().to_string(),
            }]));
        }
    };
    let mut p = Parser {
        text,
        violations: Vec::new(),
    };
    for key in table.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            p.violation(key, "unknown key".into());
        }
    }

    let topology = match table.get("topology") {
        None => {
            p.violations.push(ConfigViolation {
                line: None,
                field: "topology".into(),
                message: "required key is missing".into(),
            });
            None
        }
        Some(v) => p.string(&table, "topology", v).and_then(|s| match s.parse() {
            Ok(t) => Some(t),
            Err(m) => {
                p.violation("topology", m);
                None
            }
        }),
    };
    let mut cfg = ExperimentConfig::new(topology.unwrap_or(Topology::MachZehnder));

    if let Some(v) = table.get("alpha") {
        cfg.alpha = p.float(&table, "alpha", v).unwrap_or(cfg.alpha);
    }
    match (table.get("theta"), table.get("theta_sweep")) {
        (Some(_), Some(_)) => p.violation("theta_sweep", "theta and theta_sweep are exclusive".into()),
        (Some(v), None) => {
            if let Some(t) = p.float(&table, "theta", v) {
                cfg.theta = ThetaSpec::Fixed(t);
            }
        }
        (None, Some(v)) => {
            if let Some(s) = p.sweep(v) {
                cfg.theta = s;
            }
        }
        (None, None) => {}
    }
    if let Some(v) = table.get("detectors_on") {
        cfg.detectors_on = p.boolean("detectors_on", v).unwrap_or(false);
    }
    cfg.detector_overlap = Complex::new(
        p.optional_float(&table, "detector_overlap_re").unwrap_or(0.0),
        p.optional_float(&table, "detector_overlap_im").unwrap_or(0.0),
    );
    let t_re = p.optional_float(&table, "barrier_transmission_re");
    let t_im = p.optional_float(&table, "barrier_transmission_im");
    if t_re.is_some() || t_im.is_some() {
        cfg.barrier_transmission = Some(Complex::new(t_re.unwrap_or(0.0), t_im.unwrap_or(0.0)));
    }
    if let Some(v) = table.get("slit_open") {
        cfg.slit_open = p.boolean("slit_open", v).unwrap_or(false);
    }
    if let Some(v) = table.get("shots") {
        match v.as_integer() {
            Some(n) if n >= 1 => cfg.shots = n as u64,
            Some(n) => p.violation("shots", format!("{n} is not a positive shot count")),
            None => p.violation("shots", "expected an integer".into()),
        }
    }
    if let Some(v) = table.get("seed") {
        let parsed = match v {
            Value::Integer(n) if *n >= 0 => Ok(*n as u64),
            Value::Integer(n) => Err(format!("{n} is negative; seeds are unsigned 64-bit")),
            Value::String(s) => parse_seed(s),
            _ => Err("expected an unsigned 64-bit integer".into()),
        };
        match parsed {
            Ok(s) => cfg.seed = s,
            Err(m) => p.violation("seed", m),
        }
    }
    if let Some(v) = table.get("model") {
        if let Some(s) = p.string(&table, "model", v) {
            match s.parse() {
                Ok(m) => cfg.model = m,
                Err(m) => p.violation("model", m),
            }
        }
    }

    // Range and topology checks on the assembled value.
    if topology.is_some() {
        for mut v in cfg.violations() {
            v.line = p.line_of_field(&v.field);
            p.violations.push(v);
        }
    }
    if p.violations.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(p.violations))
    }
}

/// Parse a decimal u64 seed.
pub fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| format!("{s:?} is not an unsigned 64-bit seed"))
}

/// Seed precedence: command-line flag, then environment, then document.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, file: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(e) => parse_seed(e).map_err(|m| {
            Error::Config(vec![ConfigViolation {
                line: None,
                field: SEED_ENV_VAR.into(),
                message: m,
            }])
        }),
        None => Ok(file),
    }
}

struct Parser<'a> {
    text: &'a str,
    violations: Vec<ConfigViolation>,
}

impl Parser<'_> {
    fn violation(&mut self, field: &str, message: String) {
        let line = self.line_of_key(field);
        self.violations.push(ConfigViolation {
            line,
            field: field.to_string(),
            message,
        });
    }

    fn line_of_key(&self, key: &str) -> Option<usize> {
        self.text.lines().position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .map(|rest| rest.trim_start().starts_with('='))
                .unwrap_or(false)
        })
        .map(|i| i + 1)
    }

    /// Line for a validated field, which may be split over `_re`/`_im` keys.
    fn line_of_field(&self, field: &str) -> Option<usize> {
        self.line_of_key(field)
            .or_else(|| self.line_of_key(&format!("{field}_re")))
            .or_else(|| self.line_of_key(&format!("{field}_im")))
    }

    fn float(&mut self, _t: &Table, key: &str, v: &Value) -> Option<f64> {
        match v {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Integer(n) => Some(*n as f64),
            Value::Float(_) => {
                self.violation(key, "must be finite".into());
                None
            }
            _ => {
                self.violation(key, "expected a number".into());
                None
            }
        }
    }

    fn optional_float(&mut self, t: &Table, key: &str) -> Option<f64> {
        t.get(key).and_then(|v| self.float(t, key, v))
    }

    fn boolean(&mut self, key: &str, v: &Value) -> Option<bool> {
        let b = v.as_bool();
        if b.is_none() {
            self.violation(key, "expected true or false".into());
        }
        b
    }

    fn string<'v>(&mut self, _t: &Table, key: &str, v: &'v Value) -> Option<&'v str> {
        let s = v.as_str();
        if s.is_none() {
            self.violation(key, "expected a string".into());
        }
        s
    }

    fn sweep(&mut self, v: &Value) -> Option<ThetaSpec> {
        let Some(t) = v.as_table() else {
            self.violation(
                "theta_sweep",
                "expected an inline table { start, stop, points }".into(),
            );
            return None;
        };
        for k in t.keys() {
            if !["start", "stop", "points"].contains(&k.as_str()) {
                self.violation("theta_sweep", format!("unknown sweep key {k:?}"));
            }
        }
        let mut num = |k: &str| -> Option<f64> {
            match t.get(k) {
                Some(Value::Float(x)) => Some(*x),
                Some(Value::Integer(n)) => Some(*n as f64),
                _ => {
                    self.violation("theta_sweep", format!("{k} must be a number"));
                    None
                }
            }
        };
        let start = num("start");
        let stop = num("stop");
        let points = match t.get("points").and_then(Value::as_integer) {
            Some(n) if n >= 1 => Some(n as usize),
            _ => {
                self.violation("theta_sweep", "points must be a positive integer".into());
                None
            }
        };
        Some(ThetaSpec::Sweep {
            start: start?,
            stop: stop?,
            points: points?,
        })
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<ConfigViolation> {
        match load_config(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = load_config("topology = \"mach_zehnder\"\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::new(Topology::MachZehnder));
    }

    #[test]
    fn overlap_out_of_range_names_field() {
        let v = violations("topology = \"ab_ring\"\ndetectors_on = true\ndetector_overlap_re = 1.5\n");
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "detector_overlap");
        assert_eq!(v[0].line, Some(3));
    }

    #[test]
    fn slit_on_biprism_is_topology_mismatch() {
        let v = violations("topology = \"biprism\"\nslit_open = true\n");
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "slit_open");
        assert!(v[0].message.contains("ab_ring"));
        assert_eq!(v[0].line, Some(2));
    }

    #[test]
    fn all_violations_reported() {
        let doc = "topology = \"mach_zehnder\"\nalpha = 2.0\nbogus = 1\nbarrier_transmission_re = 0.5\nshots = 0\nmodel = \"pilot-wave\"\n";
        let v = violations(doc);
        let fields: Vec<&str> = v.iter().map(|x| x.field.as_str()).collect();
        for f in ["bogus", "alpha", "barrier_transmission", "shots", "model"] {
            assert!(fields.contains(&f), "missing {f} in {fields:?}");
        }
        let bogus = v.iter().find(|x| x.field == "bogus").unwrap();
        assert_eq!(bogus.line, Some(3));
    }

    #[test]
    fn missing_topology_and_syntax_errors() {
        let v = violations("alpha = 0.5\n");
        assert!(v.iter().any(|x| x.field == "topology"));
        let v = violations("topology = \"ab_ring\"\nalpha = = 3\n");
        assert_eq!(v[0].line, Some(2));
    }

    #[test]
    fn theta_forms() {
        let cfg = load_config(
            "topology = \"ab_ring\"\ntheta_sweep = { start = 0, stop = 6.283185307179586, points = 4 }\n",
        )
        .unwrap();
        let g = cfg.theta.grid();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 0.0);
        assert!((g[2] - std::f64::consts::PI).abs() < 1e-15);
        let v = violations("topology = \"ab_ring\"\ntheta = 1.0\ntheta_sweep = { start = 0, stop = 1, points = 2 }\n");
        assert_eq!(v[0].field, "theta_sweep");
    }

    #[test]
    fn seeds_and_precedence() {
        let cfg = load_config("topology = \"biprism\"\nseed = \"18446744073709551615\"\n").unwrap();
        assert_eq!(cfg.seed, u64::MAX);
        assert!(load_config("topology = \"biprism\"\nseed = -3\n").is_err());
        assert_eq!(resolve_seed(Some(1), Some("2"), 3).unwrap(), 1);
        assert_eq!(resolve_seed(None, Some("2"), 3).unwrap(), 2);
        assert_eq!(resolve_seed(None, None, 3).unwrap(), 3);
        assert!(resolve_seed(None, Some("x"), 3).is_err());
    }

    #[test]
    fn switched_off_detectors_act_blind() {
        let mut cfg = ExperimentConfig::new(Topology::AbRing);
        cfg.detector_overlap = Complex::new(0.0, 0.0);
        assert_eq!(cfg.effective_coupling(), DetectorCoupling::blind());
        cfg.detectors_on = true;
        assert_eq!(cfg.effective_coupling(), DetectorCoupling::orthogonal());
    }

    #[test]
    fn document_round_trip() {
        let mut cfg = ExperimentConfig::new(Topology::AbRing);
        cfg.alpha = 0.1 + 0.2;
        cfg.theta = ThetaSpec::Sweep {
            start: -0.3,
            stop: 1e-7,
            points: 17,
        };
        cfg.detectors_on = true;
        cfg.detector_overlap = Complex::new(0.123456789012345678, -1.0 / 3.0);
        cfg.barrier_transmission = Some(Complex::new(0.6, 1e-300));
        cfg.slit_open = true;
        cfg.shots = 123;
        cfg.seed = u64::MAX - 5;
        cfg.model = PhysicalModel::OrthodoxParticle;
        let back = load_config(&cfg.to_document()).unwrap();
        assert_eq!(back, cfg);
    }
}
