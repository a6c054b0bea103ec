//! Constants pinned by an earlier run of the `fixtures` experiment.
//!
//! Bound statistics have no closed-form constant, so the measured values are
//! stored here along with the command that produced them, and later runs
//! must reproduce them exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{round_sig, ExactValue};
use crate::Rational;

use super::report::DISPLAY_DIGITS;

pub const PINNED_JSON: &str = include_str!("../../fixtures/constants.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FixtureValue {
    Exact(ExactValue),
    Real(f64),
}

impl FixtureValue {
    pub fn exact(r: &Rational) -> Self {
        FixtureValue::Exact(r.into())
    }

    pub fn real(x: f64) -> Self {
        FixtureValue::Real(round_sig(x, DISPLAY_DIGITS))
    }

    pub fn to_real(&self) -> f64 {
        use crate::scalar::Scalar;
        match self {
            FixtureValue::Exact(e) => e.to_rational().map_or(f64::NAN, |r| r.to_real()),
            FixtureValue::Real(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub statistic: String,
    pub q: u32,
    pub g: usize,
    /// How the discriminants were chosen, e.g. `exhaustive` or `sample=500,seed=1`.
    pub grid: String,
    pub constant: FixtureValue,
    pub command: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub version: String,
    pub entries: Vec<FixtureEntry>,
}

impl Fixtures {
    pub fn pinned() -> Result<Self> {
        Self::parse(PINNED_JSON)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            input: "fixtures".into(),
            reason: e.to_string(),
        })
    }

    pub fn find(&self, statistic: &str, q: u32, g: usize) -> Option<&FixtureEntry> {
        self.entries
            .iter()
            .find(|e| e.statistic == statistic && e.q == q && e.g == g)
    }

    pub fn find_grid(&self, statistic: &str, q: u32, g: usize, grid: &str) -> Option<&FixtureEntry> {
        self.entries
            .iter()
            .find(|e| e.statistic == statistic && e.q == q && e.g == g && e.grid == grid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixtures serialize")
    }
}
