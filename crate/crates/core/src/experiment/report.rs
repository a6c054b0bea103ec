use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{round_sig, ExactValue, Scalar};
use crate::Rational;

/// Significant digits kept for every floating value in a report.
pub const DISPLAY_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Empirical {
    Exact(ExactValue),
    Real(f64),
}

impl Empirical {
    pub fn exact(r: &Rational) -> Self {
        Empirical::Exact(r.into())
    }

    pub fn real(x: f64) -> Self {
        Empirical::Real(round_sig(x, DISPLAY_DIGITS))
    }

    pub fn to_real(&self) -> f64 {
        match self {
            Empirical::Exact(e) => e.to_rational().map_or(f64::NAN, |r| r.to_real()),
            Empirical::Real(x) => *x,
        }
    }

    fn cell(&self) -> String {
        match self {
            Empirical::Exact(e) => format!("{}/{}", e.num, e.den),
            Empirical::Real(x) => x.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Must hold exactly; a failure makes the run fail.
    Identity,
    /// A measured quantity compared against main terms or pinned constants.
    Statistic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub name: String,
    pub kind: RowKind,
    pub empirical: Option<Empirical>,
    pub candidates: BTreeMap<String, f64>,
    pub rel_errors: BTreeMap<String, f64>,
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ResultRow {
    pub fn identity(name: &str, checked: usize, failures: &[String]) -> Self {
        ResultRow {
            name: name.into(),
            kind: RowKind::Identity,
            empirical: Some(Empirical::Real(checked as f64)),
            candidates: BTreeMap::new(),
            rel_errors: BTreeMap::new(),
            pass: Some(failures.is_empty()),
            detail: (!failures.is_empty()).then(|| {
                let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
                format!("{} failures, first: {}", failures.len(), shown.join("; "))
            }),
        }
    }

    pub fn statistic(name: &str, empirical: Empirical) -> Self {
        ResultRow {
            name: name.into(),
            kind: RowKind::Statistic,
            empirical: Some(empirical),
            candidates: BTreeMap::new(),
            rel_errors: BTreeMap::new(),
            pass: None,
            detail: None,
        }
    }

    pub fn candidate(mut self, name: &str, value: f64) -> Self {
        self.candidates.insert(name.into(), round_sig(value, DISPLAY_DIGITS));
        self
    }

    pub fn rel_error(mut self, name: &str, value: f64) -> Self {
        self.rel_errors.insert(name.into(), round_sig(value, DISPLAY_DIGITS));
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub q: u32,
    pub g: usize,
    pub gamma: u32,
    pub mode: String,
    pub seed: u64,
    /// Number of sampled discriminants per degree; 0 means exhaustive.
    pub sample_size: usize,
    pub epsilon: f64,
    pub version: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub meta: Meta,
    pub results: Vec<ResultRow>,
    pub fixtures_version: String,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ExperimentReport {
    pub fn row(&self, name: &str) -> Option<&ResultRow> {
        self.results.iter().find(|r| r.name == name)
    }

    /// True iff no identity row failed.
    pub fn identities_pass(&self) -> bool {
        self.results
            .iter()
            .filter(|r| r.kind == RowKind::Identity)
            .all(|r| r.pass != Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record([
            "q", "g", "mode", "name", "kind", "empirical", "candidates", "rel_errors", "pass", "detail",
        ])
        .map_err(io)?;
        let joined = |m: &BTreeMap<String, f64>| {
            m.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        for r in &self.results {
            w.write_record([
                self.meta.q.to_string(),
                self.meta.g.to_string(),
                self.meta.mode.clone(),
                r.name.clone(),
                match r.kind {
                    RowKind::Identity => "identity".into(),
                    RowKind::Statistic => "statistic".into(),
                },
                r.empirical.as_ref().map(Empirical::cell).unwrap_or_default(),
                joined(&r.candidates),
                joined(&r.rel_errors),
                r.pass.map(|p| p.to_string()).unwrap_or_default(),
                r.detail.clone().unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
