//! Seeded property suites over structured matrix families.
//!
//! Each property is an implication checked on random matrices. A trial whose
//! hypothesis does not hold is counted as vacuous, never as a pass. Failing
//! trials keep the exact matrix and the per-trial seed so they can be replayed.

mod generate;
mod properties;

pub use generate::{generate, generate_indexed, generate_with, overlap_from, satisfies, CaseSpec, Family, MAX_ORDER, MIN_ORDER};
pub use properties::{check_matrix, RAY_GRID, RAY_TOL, RESTRICTION_TOL, ROTATION_EXPONENTS};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::OptimizerConfig;
use crate::error::{Error, Result};
use crate::numkernel::ToleranceConfig;
use crate::rng::{derive_seed, label_tag};
use properties::{matrix_bits, run_trial, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    /// Sanity negative: complementary range and kernel do not force an angle below pi.
    #[serde(rename = "CONVERSE")]
    Converse,
}

impl PropertyId {
    /// The theorem properties run by `all`.
    pub const ALL: [PropertyId; 10] = [
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::P3,
        PropertyId::P4,
        PropertyId::P5,
        PropertyId::P6,
        PropertyId::P7,
        PropertyId::P8,
        PropertyId::P9,
        PropertyId::P10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::P1 => "P1",
            PropertyId::P2 => "P2",
            PropertyId::P3 => "P3",
            PropertyId::P4 => "P4",
            PropertyId::P5 => "P5",
            PropertyId::P6 => "P6",
            PropertyId::P7 => "P7",
            PropertyId::P8 => "P8",
            PropertyId::P9 => "P9",
            PropertyId::P10 => "P10",
            PropertyId::Converse => "CONVERSE",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .chain([PropertyId::Converse])
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Orders are drawn uniformly from `[2, n_max]`.
    pub n_max: usize,
    pub tol: ToleranceConfig,
    /// Per-trial seeds replace `optimizer.seed`.
    pub optimizer: OptimizerConfig,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            n_max: 6,
            tol: ToleranceConfig::default(),
            optimizer: OptimizerConfig::light(0),
            timing: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(MIN_ORDER..=MAX_ORDER).contains(&self.n_max) {
            return Err(Error::OrderOutOfRange(self.n_max));
        }
        self.tol.validate()?;
        self.optimizer.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hypothesis does not hold for this matrix.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Measured {
    Number(f64),
    Flag(bool),
    Text(String),
}

impl From<f64> for Measured {
    fn from(v: f64) -> Self {
        Measured::Number(v)
    }
}

impl From<bool> for Measured {
    fn from(v: bool) -> Self {
        Measured::Flag(v)
    }
}

impl From<String> for Measured {
    fn from(v: String) -> Self {
        Measured::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    /// Per-trial seed; replaying the trial with it reproduces the matrix.
    pub seed: u64,
    pub family: Option<Family>,
    pub n: usize,
    /// Row-major `[re, im]` pairs, or empty when generation itself failed.
    pub data: Vec<[f64; 2]>,
    pub measured: BTreeMap<String, Measured>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: PropertyId,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub vacuous: usize,
    pub counterexamples: Vec<Counterexample>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

/// Seed of trial `trial` of property `id` under master seed `seed`.
pub fn trial_seed(id: PropertyId, seed: u64, trial: usize) -> u64 {
    derive_seed(seed, &[label_tag(id.name()), trial as u64])
}

/// Runs `cfg.trials` trials of one property. Trials run in parallel; the
/// report depends only on `(id, cfg)`.
pub fn run_property(id: PropertyId, cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let trials: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| (i, run_trial(id, i, trial_seed(id, cfg.seed, i), cfg)))
        .collect();
    let mut report = VerificationReport {
        property: id,
        trials: cfg.trials,
        passes: 0,
        failures: 0,
        vacuous: 0,
        counterexamples: Vec::new(),
        seed: cfg.seed,
        elapsed_ms: None,
    };
    for (i, t) in trials {
        match t.outcome {
            Outcome::Pass => report.passes += 1,
            Outcome::Vacuous => report.vacuous += 1,
            Outcome::Fail(measured) => {
                report.failures += 1;
                report.counterexamples.push(Counterexample {
                    trial: i,
                    seed: trial_seed(id, cfg.seed, i),
                    family: t.family,
                    n: t.order,
                    data: t.matrix.as_ref().map(matrix_bits).unwrap_or_default(),
                    measured,
                });
            }
        }
    }
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs several properties in order.
pub fn run_suite(ids: &[PropertyId], cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    ids.iter().map(|&id| run_property(id, cfg)).collect()
}

#[cfg(test)]
mod tests;
