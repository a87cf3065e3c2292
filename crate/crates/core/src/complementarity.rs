//! Projector models deciding whether a wave property and a particle property
//! are complementary (their projectors fail to commute) or compatible.
//!
//! Two built-in scenarios:
//!
//! - biprism, dim 3, basis `{reflected, transmitted via tunneling,
//!   transmitted otherwise}`. `P_wave` lives inside the transmitted subspace,
//!   so all three projectors are diagonal and commute.
//! - Mach-Zehnder, dim 2, path projectors `P_1`, `P_2` and `P_wave` onto the
//!   interfering state `(e1 + e^{iθ}e2)/√2`, which commutes with neither
//!   path projector.

use std::fmt;

use crate::hilbert::{commute_check, projector_onto, ComplexMatrix, StateVector, STRUCTURE_TOL};
use crate::{Complex, Error, Result};

/// Default commutator-norm threshold separating the two classes.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub operators: Vec<(String, ComplexMatrix)>,
    pub expected_complementary_pairs: Vec<(String, String)>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        operators: Vec<(String, ComplexMatrix)>,
        expected_complementary_pairs: Vec<(String, String)>,
    ) -> Result<Self> {
        for (label, op) in &operators {
            if !op.is_projector(STRUCTURE_TOL) {
                return Err(Error::TopologyMismatch(format!("operator {label} is not a projector")));
            }
        }
        Ok(Self {
            name: name.into(),
            operators,
            expected_complementary_pairs,
        })
    }

    pub fn operator(&self, label: &str) -> Option<&ComplexMatrix> {
        self.operators
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }
}

pub fn biprism_operators() -> Scenario {
    let p_r = ComplexMatrix::coordinate_projector(3, &[0]);
    let p_t = ComplexMatrix::coordinate_projector(3, &[1, 2]);
    let p_wave = ComplexMatrix::coordinate_projector(3, &[1]);
    Scenario::new(
        "biprism",
        vec![
            ("P_r".into(), p_r),
            ("P_t".into(), p_t),
            ("P_wave".into(), p_wave),
        ],
        Vec::new(),
    )
    .expect("coordinate projectors")
}

/// The interfering state `(e1 + e^{iθ}e2)/√2`.
pub fn mz_wave_state(theta: f64) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![Complex::new(s, 0.0), Complex::from_polar(s, theta)])
        .expect("two entries")
}

pub fn mz_operators(theta: f64) -> Scenario {
    let p_1 = ComplexMatrix::coordinate_projector(2, &[0]);
    let p_2 = ComplexMatrix::coordinate_projector(2, &[1]);
    let p_wave = projector_onto(&[mz_wave_state(theta)]).expect("nonzero vector");
    Scenario::new(
        "mach_zehnder",
        vec![
            ("P_1".into(), p_1),
            ("P_2".into(), p_2),
            ("P_wave".into(), p_wave),
        ],
        vec![
            ("P_wave".into(), "P_1".into()),
            ("P_wave".into(), "P_2".into()),
        ],
    )
    .expect("projectors")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Compatible,
    Complementary,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Compatible => "compatible",
            Relation::Complementary => "complementary",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairClassification {
    pub first: String,
    pub second: String,
    pub commutator_norm: f64,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub scenario: String,
    pub tol: f64,
    pub pairs: Vec<PairClassification>,
}

impl ClassificationReport {
    /// Looks up a pair in either order.
    pub fn relation(&self, a: &str, b: &str) -> Option<Relation> {
        self.find(a, b).map(|p| p.relation)
    }

    pub fn find(&self, a: &str, b: &str) -> Option<&PairClassification> {
        self.pairs
            .iter()
            .find(|p| (p.first == a && p.second == b) || (p.first == b && p.second == a))
    }

    pub fn complementary_pairs(&self) -> impl Iterator<Item = &PairClassification> {
        self.pairs
            .iter()
            .filter(|p| p.relation == Relation::Complementary)
    }

    /// True when exactly the expected pairs (order-insensitive) came out
    /// complementary.
    pub fn matches_expected(&self, scenario: &Scenario) -> bool {
        let expected_hit = |p: &PairClassification| {
            scenario.expected_complementary_pairs.iter().any(|(a, b)| {
                (p.first == *a && p.second == *b) || (p.first == *b && p.second == *a)
            })
        };
        let all_expected_present = scenario
            .expected_complementary_pairs
            .iter()
            .all(|(a, b)| self.relation(a, b) == Some(Relation::Complementary));
        all_expected_present
            && self
                .pairs
                .iter()
                .all(|p| (p.relation == Relation::Complementary) == expected_hit(p))
    }
}

/// Classify every unordered operator pair of the scenario.
pub fn classify(scenario: &Scenario, tol: f64) -> Result<ClassificationReport> {
    let ops = &scenario.operators;
    let mut pairs = Vec::new();
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            let (_, norm) = commute_check(&ops[i].1, &ops[j].1, tol)?;
            pairs.push(PairClassification {
                first: ops[i].0.clone(),
                second: ops[j].0.clone(),
                commutator_norm: norm,
                relation: if norm > tol {
                    Relation::Complementary
                } else {
                    Relation::Compatible
                },
            });
        }
    }
    Ok(ClassificationReport {
        scenario: scenario.name.clone(),
        tol,
        pairs,
    })
}
