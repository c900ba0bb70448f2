//! Suite execution and report assembly.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::checks::{evaluate, Fields, INVARIANT_FIELDS};
use crate::config::Config;
use crate::corpus::{Corpus, Entry};

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub kind: String,
    pub flags: Vec<String>,
    pub passed: bool,
    /// Set when the entry could not be evaluated at all.
    pub error: Option<String>,
    pub failures: Vec<String>,
    pub expectations_checked: usize,
    pub fields: Fields,
    /// Wall time; shown in text output only so that JSON stays reproducible.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub summary: Summary,
    pub entries: Vec<EntryReport>,
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Structural equality, with strings and integers compared by their decimal
/// text (orders are reported as strings to stay exact).
pub fn matches(expected: &toml::Value, actual: &Value) -> bool {
    match (expected, actual) {
        (toml::Value::Boolean(a), Value::Bool(b)) => a == b,
        (toml::Value::Array(a), Value::Array(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| matches(x, y))
        }
        (toml::Value::Table(t), Value::Object(o)) => {
            t.len() == o.len() && t.iter().all(|(k, v)| o.get(k).is_some_and(|w| matches(v, w)))
        }
        (toml::Value::String(s), a) => scalar_text(a).as_deref() == Some(s.as_str()),
        (toml::Value::Integer(i), a) => scalar_text(a) == Some(i.to_string()),
        _ => false,
    }
}

pub fn run_entry(entry: &Entry, cfg: &Config) -> EntryReport {
    let start = Instant::now();
    let mut report = EntryReport {
        name: entry.name.clone(),
        kind: entry.kind().to_string(),
        flags: entry.flags.clone(),
        passed: false,
        error: None,
        failures: Vec::new(),
        expectations_checked: entry.expect.len(),
        fields: Fields::new(),
        elapsed_ms: 0,
    };
    match evaluate(entry, cfg) {
        Err(e) => report.error = Some(e),
        Ok(fields) => {
            for key in INVARIANT_FIELDS {
                if fields.get(key) == Some(&Value::Bool(false)) {
                    report.failures.push(format!("invariant `{key}` does not hold"));
                }
            }
            if fields.get("mismatches").is_some_and(|m| m != &Value::from(0)) {
                report.failures.push("oracle mismatches".into());
            }
            for (key, want) in &entry.expect {
                match fields.get(key) {
                    None => report.failures.push(format!("`{key}`: field not reported")),
                    Some(got) if !matches(want, got) => {
                        report.failures.push(format!("`{key}`: expected {want}, got {got}"))
                    }
                    Some(_) => {}
                }
            }
            report.fields = fields;
        }
    }
    report.passed = report.error.is_none() && report.failures.is_empty();
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

/// Runs the selected entries (all when `only` is empty) in parallel; the
/// report lists them sorted by name.
pub fn run_suite(corpus: &Corpus, cfg: &Config, only: &[String]) -> Report {
    let selected: Vec<&Entry> = corpus
        .entries
        .iter()
        .filter(|e| only.is_empty() || only.contains(&e.name))
        .collect();
    let mut entries: Vec<EntryReport> = selected.par_iter().map(|e| run_entry(e, cfg)).collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = entries.iter().filter(|e| e.passed).count();
    Report {
        summary: Summary {
            entries: entries.len(),
            passed,
            failed: entries.len() - passed,
            seed: cfg.seed,
        },
        entries,
    }
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn entry(&self, name: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mark = if e.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {:<28} {:<18} {:>3} expectations  {:>6} ms\n",
                e.name, e.kind, e.expectations_checked, e.elapsed_ms
            ));
            if let Some(err) = &e.error {
                out.push_str(&format!("     error: {err}\n"));
            }
            for f in &e.failures {
                out.push_str(&format!("     {f}\n"));
            }
        }
        out.push_str(&format!(
            "{} entries, {} passed, {} failed\n",
            self.summary.entries, self.summary.passed, self.summary.failed
        ));
        out
    }
}
