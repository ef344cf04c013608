//! Check records and their JSON / markdown rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// `suite/case/check`; the part before the first `/` names the suite.
    pub name: String,
    /// The identity or inclusion being tested, as a formula.
    pub paper_anchor: String,
    pub pass: bool,
    pub metric: f64,
    pub tolerance: f64,
}

impl CheckRecord {
    /// `pass` is `metric <= tolerance`; non-finite metrics fail and are stored as `f64::MAX`.
    pub fn bounded(name: impl Into<String>, anchor: &str, metric: f64, tolerance: f64) -> Self {
        let finite = metric.is_finite();
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            pass: finite && metric <= tolerance,
            metric: if finite { metric } else { f64::MAX },
            tolerance,
        }
    }

    /// Exact comparison recorded as `|got − expected|` with tolerance 0.
    pub fn exact(name: impl Into<String>, anchor: &str, got: usize, expected: usize) -> Self {
        Self::bounded(name, anchor, got.abs_diff(expected) as f64, 0.0)
    }

    pub fn flag(name: impl Into<String>, anchor: &str, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            pass,
            metric: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
        }
    }

    pub fn suite(&self) -> &str {
        self.name.split('/').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// Computed values worth echoing, keyed by name.
    #[serde(default)]
    pub data: BTreeMap<String, serde_json::Value>,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn new(config: serde_json::Value) -> Self {
        Report { config, checks: Vec::new(), summary: Summary::default(), data: BTreeMap::new(), wall_time_seconds: 0.0 }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn insert_data(&mut self, key: impl Into<String>, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.data.insert(key.into(), value);
    }

    /// Sorts records by name and recomputes the summary.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.summary = Summary { total: self.checks.len(), passed, failed: self.checks.len() - passed };
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# opharm report\n\n");
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed ({:.3} s)\n",
            self.summary.total, self.summary.passed, self.summary.failed, self.wall_time_seconds
        );
        let _ = writeln!(out, "```json\n{}\n```\n", serde_json::to_string_pretty(&self.config).unwrap_or_default());
        let mut suites: BTreeMap<&str, Vec<&CheckRecord>> = BTreeMap::new();
        for c in &self.checks {
            suites.entry(c.suite()).or_default().push(c);
        }
        for (suite, records) in suites {
            let _ = writeln!(out, "## {suite}\n");
            out.push_str("| check | anchor | pass | metric | tolerance |\n|---|---|---|---|---|\n");
            for c in records {
                let _ = writeln!(
                    out,
                    "| {} | `{}` | {} | {:.3e} | {:.1e} |",
                    c.name,
                    c.paper_anchor.replace('|', "\\|"),
                    if c.pass { "pass" } else { "FAIL" },
                    c.metric,
                    c.tolerance
                );
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let mut r = Report::new(serde_json::json!({}));
        r.finish();
        assert_eq!(r.summary.total, 0);
        assert!(r.all_pass());
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert!(r.to_markdown().contains("0 checks"));
    }

    #[test]
    fn json_round_trip_and_markdown_rows() {
        let mut r = Report::new(serde_json::json!({"seed": 3}));
        r.push(CheckRecord::bounded("b/x", "Θ̂(σ)", 1e-12, 1e-10));
        r.push(CheckRecord::exact("a/dim", "dim = |G|·|G_σ|", 18, 18));
        r.push(CheckRecord::bounded("a/bad", "x ⊆ y", f64::NAN, 1.0));
        r.insert_data("dims", [18, 18, 18]);
        r.finish();
        assert_eq!(r.checks[0].name, "a/bad");
        assert_eq!(r.summary, Summary { total: 3, passed: 2, failed: 1 });
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        let md = r.to_markdown();
        assert_eq!(md.matches("## ").count(), 2);
        for c in &r.checks {
            assert!(md.contains(&c.paper_anchor.replace('|', "\\|")));
        }
    }
}
