//! Seeded, serializable experiment records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

/// Non-finite floats have no JSON form; they are recorded as strings.
fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

pub trait IntoReportValue {
    fn into_value(self) -> Value;
}

impl IntoReportValue for f64 {
    fn into_value(self) -> Value {
        json_number(self)
    }
}

macro_rules! via_json {
    ($($t:ty),*) => {
        $(impl IntoReportValue for $t {
            fn into_value(self) -> Value {
                Value::from(self)
            }
        })*
    };
}
via_json!(bool, u32, u64, usize, i32, i64, String, &str);

impl IntoReportValue for Value {
    fn into_value(self) -> Value {
        self
    }
}

impl IntoReportValue for Vec<f64> {
    fn into_value(self) -> Value {
        Value::Array(self.into_iter().map(json_number).collect())
    }
}

impl IntoReportValue for Vec<usize> {
    fn into_value(self) -> Value {
        Value::from(self)
    }
}

impl IntoReportValue for Vec<String> {
    fn into_value(self) -> Value {
        Value::from(self)
    }
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            seed,
            results: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl IntoReportValue) -> &mut Self {
        self.params.insert(key.to_string(), value.into_value());
        self
    }

    pub fn result(&mut self, key: &str, value: impl IntoReportValue) -> &mut Self {
        self.results.insert(key.to_string(), value.into_value());
        self
    }

    pub fn check(
        &mut self,
        name: &str,
        expected: impl IntoReportValue,
        observed: impl IntoReportValue,
        pass: bool,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            expected: expected.into_value(),
            observed: observed.into_value(),
            pass,
        });
        self
    }

    /// Passes when `|observed − expected| <= tol`.
    pub fn check_close(&mut self, name: &str, expected: f64, observed: f64, tol: f64) -> &mut Self {
        self.check(name, expected, observed, (observed - expected).abs() <= tol)
    }

    pub fn check_at_least(&mut self, name: &str, threshold: f64, observed: f64) -> &mut Self {
        self.check(name, format!(">= {threshold}"), observed, observed >= threshold)
    }

    pub fn check_at_most(&mut self, name: &str, threshold: f64, observed: f64) -> &mut Self {
        self.check(name, format!("<= {threshold}"), observed, observed <= threshold)
    }

    pub fn check_eq<T: IntoReportValue + PartialEq + Clone>(&mut self, name: &str, expected: T, observed: T) -> &mut Self {
        let pass = expected == observed;
        self.check(name, expected, observed, pass)
    }

    /// Numeric result by key; NaN when absent or not a number.
    pub fn results_f64(&self, key: &str) -> f64 {
        self.results.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are always serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One row per param, result and check: `section,key,value,expected,pass`.
    pub fn to_csv(&self) -> String {
        fn cell(v: &Value) -> String {
            match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let rows = std::iter::once(["section".into(), "key".into(), "value".into(), "expected".into(), "pass".into()])
            .chain([["meta".to_string(), "experiment".into(), self.experiment.clone(), String::new(), String::new()]])
            .chain([["meta".to_string(), "seed".into(), self.seed.to_string(), String::new(), String::new()]])
            .chain(self.params.iter().map(|(k, v)| ["param".into(), k.clone(), cell(v), String::new(), String::new()]))
            .chain(self.results.iter().map(|(k, v)| ["result".into(), k.clone(), cell(v), String::new(), String::new()]))
            .chain(self.checks.iter().map(|c| {
                ["check".into(), c.name.clone(), cell(&c.observed), cell(&c.expected), c.pass.to_string()]
            }));
        for row in rows {
            w.write_record(&row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
    }
}
