//! Experiment reports: exact values as `"p/q"`, labelled decimal renderings
//! and a list of named assertions.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::norms::{NormValue, TermProfile};
use crate::rational::{self, Rational};

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not asserted.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub operation: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub exact_values: BTreeMap<String, String>,
    pub decimal_renderings: BTreeMap<String, String>,
    pub assertions: Vec<Assertion>,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub term_profile: Option<TermProfile>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl ExperimentReport {
    pub fn new(operation: impl Into<String>, config: Value) -> Self {
        Self {
            operation: operation.into(),
            config,
            seed: None,
            exact_values: BTreeMap::new(),
            decimal_renderings: BTreeMap::new(),
            assertions: Vec::new(),
            runtime_ms: 0,
            term_profile: None,
            started: Some(Instant::now()),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Stops the clock.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.runtime_ms = t.elapsed().as_millis() as u64;
        }
        self
    }

    pub fn record(&mut self, name: impl Into<String>, r: &Rational) {
        let name = name.into();
        self.decimal_renderings.insert(name.clone(), rational::to_decimal(r, DECIMAL_DIGITS));
        self.exact_values.insert(name, rational::format(r));
    }

    /// Exact value when available, otherwise only the decimal rendering.
    pub fn record_norm(&mut self, name: impl Into<String>, v: &NormValue) {
        let name = name.into();
        match &v.exact {
            Some(r) => self.record(name, r),
            None => {
                self.decimal_renderings.insert(name, format!("{:.*e}", DECIMAL_DIGITS - 1, v.approx));
            }
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, lhs: impl Display, rhs: impl Display) -> bool {
        self.assertions.push(Assertion {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
        ok
    }

    pub fn check_le(&mut self, name: impl Into<String>, lhs: &Rational, rhs: &Rational) -> bool {
        self.check(name, lhs <= rhs, rational::format(lhs), rational::format(rhs))
    }

    pub fn check_lt(&mut self, name: impl Into<String>, lhs: &Rational, rhs: &Rational) -> bool {
        self.check(name, lhs < rhs, rational::format(lhs), rational::format(rhs))
    }

    pub fn check_eq(&mut self, name: impl Into<String>, lhs: &Rational, rhs: &Rational) -> bool {
        self.check(name, lhs == rhs, rational::format(lhs), rational::format(rhs))
    }

    /// `lhs <= rhs`, exactly when both are exact, else with relative slack.
    pub fn check_norm_le(&mut self, name: impl Into<String>, lhs: &NormValue, rhs: &NormValue, rel: f64) -> bool {
        let render = |v: &NormValue| match &v.exact {
            Some(r) => rational::format(r),
            None => format!("{:e}", v.approx),
        };
        self.check(name, lhs.le_within(rhs, rel), render(lhs), render(rhs))
    }

    pub fn info(&mut self, name: impl Into<String>, lhs: impl Display, rhs: impl Display) {
        self.assertions.push(Assertion {
            name: name.into(),
            status: Status::Info,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| a.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.assertions.iter().filter(|a| a.status == status).count()
    }

    /// Appends another report's values and assertions under `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: ExperimentReport) {
        let key = |k: String| format!("{prefix}/{k}");
        self.exact_values.extend(other.exact_values.into_iter().map(|(k, v)| (key(k), v)));
        self.decimal_renderings.extend(other.decimal_renderings.into_iter().map(|(k, v)| (key(k), v)));
        self.assertions.extend(other.assertions.into_iter().map(|mut a| {
            a.name = key(a.name);
            a
        }));
        if self.term_profile.is_none() {
            self.term_profile = other.term_profile;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The term profile when one was recorded, otherwise the assertions.
    pub fn to_csv(&self) -> String {
        if let Some(p) = &self.term_profile {
            return p.to_csv();
        }
        let mut out = String::from("name,status,lhs,rhs\n");
        for a in &self.assertions {
            let status = match a.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Info => "info",
            };
            out.push_str(&format!("{},{status},{},{}\n", csv_field(&a.name), csv_field(&a.lhs), csv_field(&a.rhs)));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use serde_json::json;

    #[test]
    fn layout_and_status() {
        let mut r = ExperimentReport::new("demo", json!({"n": 3})).with_seed(9);
        r.record("half", &ratio(1, 2));
        assert!(r.check_lt("small", &ratio(1, 3), &ratio(1, 2)));
        r.info("note", 1, 2);
        assert!(r.passed());
        assert!(!r.check_le("bad", &ratio(2, 3), &ratio(1, 2)));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let v: Value = serde_json::from_str(&r.finish().to_json()).unwrap();
        assert_eq!(v["exact_values"]["half"], "1/2");
        assert_eq!(v["decimal_renderings"]["half"].as_str().unwrap().len(), "5.".len() + 29 + "e-1".len());
        assert_eq!(v["assertions"][1]["status"], "info");
        assert_eq!(v["seed"], 9);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 7);
    }

    #[test]
    fn absorb_prefixes_and_csv_quotes() {
        let mut a = ExperimentReport::new("outer", Value::Null);
        let mut b = ExperimentReport::new("inner", Value::Null);
        b.check("x,y", true, "1", "2");
        a.absorb("sub", b);
        assert_eq!(a.assertions[0].name, "sub/x,y");
        assert!(a.to_csv().contains("\"sub/x,y\",pass,1,2"));
    }
}
