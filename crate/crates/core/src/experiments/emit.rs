//! CSV and JSON serialization of run outputs.
//!
//! JSON objects keep a fixed key order and write every float with 17
//! significant digits (`d.dddddddddddddddde±x`), which reparses to the same
//! bits. CSV floats use the shortest round-trip decimal form. Both are
//! independent of locale.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::de::DeserializeOwned;

use crate::complementarity::ClassificationReport;
use crate::experiments::predict::{CurrentPrediction, Discrimination, Signal};
use crate::montecarlo::{FringeData, RunSummary};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// Minimal ordered JSON tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(u64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    fn nums(xs: &[f64]) -> Json {
        Json::Arr(xs.iter().map(|&x| Json::Num(x)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => write!(out, "{n}").unwrap(),
            Json::Num(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
            Json::Num(_) => out.push_str("null"),
            Json::Str(s) => write_string(out, s),
            Json::Arr(items) => {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    v.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_string(out, k);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => write!(out, "\\u{:04x}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn csv_float(x: f64) -> String {
    format!("{x:?}")
}

/// Payloads that can be written as CSV or JSON.
pub trait Emit {
    fn to_json(&self) -> Json;
    fn csv_header(&self) -> &'static [&'static str];
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

pub fn emit<T: Emit + ?Sized>(payload: &T, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = payload.to_json().render();
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(payload.csv_header()).expect("in-memory write");
            for row in payload.csv_rows() {
                w.write_record(&row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Parse JSON produced by [`emit`] back into its payload type.
pub fn parse_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| crate::Error::Io(e.into()))
}

impl Emit for RunSummary {
    fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("n", Json::Int(self.n)),
            ("clicks1", Json::Int(self.clicks1)),
            ("clicks2", Json::Int(self.clicks2)),
            ("coincidences", Json::Int(self.coincidences)),
            ("anticoincidence_rate", Json::Num(self.anticoincidence_rate)),
            ("arrivals", Json::Int(self.arrivals)),
            ("collector_rate", Json::Num(self.collector_rate)),
        ])
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &[
            "n",
            "clicks1",
            "clicks2",
            "coincidences",
            "anticoincidence_rate",
            "arrivals",
            "collector_rate",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.n.to_string(),
            self.clicks1.to_string(),
            self.clicks2.to_string(),
            self.coincidences.to_string(),
            csv_float(self.anticoincidence_rate),
            self.arrivals.to_string(),
            csv_float(self.collector_rate),
        ]]
    }
}

impl Emit for FringeData {
    fn to_json(&self) -> Json {
        let eraser = match &self.eraser {
            None => Json::Null,
            Some(e) => Json::Obj(vec![
                ("fringe", Json::nums(&e.fringe)),
                ("fringe_stderr", Json::nums(&e.fringe_stderr)),
                ("antifringe", Json::nums(&e.antifringe)),
                ("antifringe_stderr", Json::nums(&e.antifringe_stderr)),
                ("unconditioned", Json::nums(&e.unconditioned)),
                ("unconditioned_stderr", Json::nums(&e.unconditioned_stderr)),
            ]),
        };
        Json::Obj(vec![
            ("theta_grid", Json::nums(&self.theta_grid)),
            ("mean_intensity", Json::nums(&self.mean_intensity)),
            ("stderr", Json::nums(&self.stderr)),
            ("visibility_estimate", Json::Num(self.visibility_estimate)),
            ("visibility_stderr", Json::Num(self.visibility_stderr)),
            ("fit_degenerate", Json::Bool(self.fit_degenerate)),
            ("eraser", eraser),
        ])
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &["theta", "mean_intensity", "stderr"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.theta_grid
            .iter()
            .zip(&self.mean_intensity)
            .zip(&self.stderr)
            .map(|((t, m), s)| vec![csv_float(*t), csv_float(*m), csv_float(*s)])
            .collect()
    }
}

fn signal_name(s: Signal) -> &'static str {
    match s {
        Signal::Collector => "collector",
        Signal::ErasedSymmetric => "erased_symmetric",
    }
}

impl Emit for CurrentPrediction {
    fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("model", Json::Str(self.model.as_str().into())),
            ("signal", Json::Str(signal_name(self.signal).into())),
            ("theta", Json::Num(self.theta)),
            ("a", Json::Num(self.a)),
            ("b", Json::Num(self.b)),
            ("c", Json::Num(self.c)),
            ("collector_current", Json::Num(self.collector_current)),
            ("interference_present", Json::Bool(self.interference_present)),
            ("intensity_scale", Json::Num(self.intensity_scale)),
        ])
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &[
            "model",
            "signal",
            "theta",
            "a",
            "b",
            "c",
            "collector_current",
            "interference_present",
            "intensity_scale",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.model.as_str().into(),
            signal_name(self.signal).into(),
            csv_float(self.theta),
            csv_float(self.a),
            csv_float(self.b),
            csv_float(self.c),
            csv_float(self.collector_current),
            self.interference_present.to_string(),
            csv_float(self.intensity_scale),
        ]]
    }
}

impl Emit for Discrimination {
    fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("unitary", self.unitary.to_json()),
            ("orthodox", self.orthodox.to_json()),
            ("separation", Json::Num(self.separation)),
            ("discriminating", Json::Bool(self.discriminating)),
            ("reason", Json::Str(self.reason.clone())),
        ])
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &[
            "model",
            "collector_current",
            "interference_present",
            "separation",
            "discriminating",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        [&self.unitary, &self.orthodox]
            .iter()
            .map(|p| {
                vec![
                    p.model.as_str().into(),
                    csv_float(p.collector_current),
                    p.interference_present.to_string(),
                    csv_float(self.separation),
                    self.discriminating.to_string(),
                ]
            })
            .collect()
    }
}

impl Emit for ClassificationReport {
    fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("scenario", Json::Str(self.scenario.clone())),
            ("tol", Json::Num(self.tol)),
            (
                "pairs",
                Json::Arr(
                    self.pairs
                        .iter()
                        .map(|p| {
                            Json::Obj(vec![
                                ("first", Json::Str(p.first.clone())),
                                ("second", Json::Str(p.second.clone())),
                                ("commutator_norm", Json::Num(p.commutator_norm)),
                                ("relation", Json::Str(p.relation.to_string())),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }

    fn csv_header(&self) -> &'static [&'static str] {
        &["first", "second", "commutator_norm", "relation"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.pairs
            .iter()
            .map(|p| {
                vec![
                    p.first.clone(),
                    p.second.clone(),
                    csv_float(p.commutator_norm),
                    p.relation.to_string(),
                ]
            })
            .collect()
    }
}
