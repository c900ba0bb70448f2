//! One-off commands. Each builds a single ad-hoc entry and prints the fields
//! the suite would compute for it.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::checks::{evaluate, Fields};
use crate::config::Config;
use crate::corpus::*;
use crate::CliError;

pub fn adhoc(name: &str, payload: Payload) -> Entry {
    Entry {
        name: name.to_string(),
        flags: Vec::new(),
        topics: Vec::new(),
        expect: BTreeMap::new(),
        payload,
    }
}

/// Evaluates an ad-hoc entry; invariant fields that come out false are
/// reported as a run error.
pub fn compute(entry: &Entry, cfg: &Config) -> Result<Fields, CliError> {
    let fields = evaluate(entry, cfg).map_err(CliError::Run)?;
    let broken: Vec<&str> = crate::checks::INVARIANT_FIELDS
        .iter()
        .copied()
        .filter(|k| fields.get(*k) == Some(&Value::Bool(false)))
        .collect();
    if broken.is_empty() {
        Ok(fields)
    } else {
        Err(CliError::Run(format!(
            "{}\ninvariants failed: {}",
            render_fields(&fields),
            broken.join(", ")
        )))
    }
}

pub fn render_fields(fields: &Fields) -> String {
    let mut out = String::new();
    for (k, v) in fields {
        let v = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k}: {v}\n"));
    }
    out
}

pub fn presentation(text: &str, words: Vec<String>) -> Payload {
    Payload::Presentation(PresentationPayload {
        presentation: text.to_string(),
        certificate: None,
        expand: words.clone(),
        words,
        compare_primes: Vec::new(),
        compare_stages: 3,
    })
}

pub fn parse_certificate(text: &str) -> Result<prosol::certify::CertificateSpec, CliError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("certificate: {e}")))
    } else {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("certificate: {e}")))
    }
}
