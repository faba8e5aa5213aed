//! Scenario reports: metrics plus bound checks, serialized with sorted keys.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use qcore::CMat;

/// How a measured value must relate to its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// `|measured − bound| ≤ slack`.
    #[serde(rename = "==")]
    Equal,
}

/// One bound, the formula it comes from, and the measured value beside it.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub formula: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    /// Statistical or numerical allowance already folded into `pass`.
    pub slack: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, formula: &str, measured: f64, relation: Relation, bound: f64, slack: f64) -> Self {
        let pass = match relation {
            Relation::AtMost => measured <= bound + slack,
            Relation::AtLeast => measured >= bound - slack,
            Relation::Equal => (measured - bound).abs() <= slack,
        };
        Self { name: name.into(), formula: formula.into(), measured, bound, relation, slack, pass }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub scenario: String,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub params: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(scenario: &str) -> Self {
        Self { scenario: scenario.into(), ..Self::default() }
    }

    pub fn metric(&mut self, key: &str, v: impl Serialize) {
        self.metrics.insert(key.into(), serde_json::to_value(v).expect("metric serializes"));
    }

    pub fn param(&mut self, key: &str, v: impl Serialize) {
        self.params.insert(key.into(), serde_json::to_value(v).expect("parameter serializes"));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "scenario": self.scenario,
            "seed": self.seed,
            "inputs": self.inputs,
            "params": self.params,
            "metrics": self.metrics,
            "checks": self.checks,
            "pass": self.pass(),
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms);
        }
        v
    }

    /// Human summary, one line per check.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({}/{} checks)\n",
            self.scenario,
            if self.pass() { "PASS" } else { "FAIL" },
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        for c in &self.checks {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
                Relation::Equal => "==",
            };
            s += &format!(
                "  [{}] {}: {:.6e} {} {:.6e}   ({})\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.measured,
                rel,
                c.bound,
                c.formula
            );
        }
        s
    }
}

/// A matrix as rows of `[re, im]` pairs.
pub fn matrix_value(m: &CMat) -> Value {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!(rows)
}
