//! Human-readable account of one corpus entry: what it exercises and what the
//! run computed for it.

use std::fmt::Write;

use crate::config::Config;
use crate::corpus::{Corpus, Payload};
use crate::report::run_entry;
use crate::CliError;

/// Topic labels used in the corpus, with a one-line description each.
pub const TOPICS: &[(&str, &str)] = &[
    ("derived-kernel", "intersection of the derived series, certified by a commutator identity"),
    ("perfect", "groups equal to their commutator subgroup; the soluble completion is a point"),
    ("congruence-layers", "successive quotients of the congruence filtration of SL_d and GL_d over Z_p"),
    ("residual-p", "the tower K_1/K_a of finite p-groups separating points of a congruence subgroup"),
    ("two-group-tower", "level quotients of a tree automaton group, each a finite 2-group"),
    ("parafree", "a subgroup with free lower central quotients that is not the whole free group"),
    ("lower-central", "ranks of lower central layers of free groups and depth of words"),
    ("metric", "distance 2^-n from the first separating stage of a quotient tower"),
    ("refinement", "comparison of the topologies of two towers on the same group"),
    ("finite-completion", "soluble residual and derived quotients of finite groups"),
    ("padic", "stage-by-stage arithmetic in the p-adic integers"),
    ("completion-comparison", "derived tower versus finite p-towers of the same group"),
    ("oracle", "randomized agreement with an independent reference implementation"),
];

pub fn topic_description(label: &str) -> Option<&'static str> {
    TOPICS.iter().find(|(l, _)| *l == label).map(|(_, d)| *d)
}

fn input_summary(p: &Payload) -> String {
    match p {
        Payload::Presentation(x) => x.presentation.clone(),
        Payload::PermutationGroup(x) => format!("degree {}: {}", x.degree, x.generators.join(", ")),
        Payload::MatrixGroup(x) => format!("{} generators mod {}", x.generators.len(), x.modulus),
        Payload::Wreath(x) => format!(
            "({}) wr ({})",
            x.base.generators.join(", "),
            x.top.generators.join(", ")
        ),
        Payload::TreeAutomaton(x) => format!(
            "{} to level {}",
            x.builtin.as_deref().unwrap_or("custom automaton"),
            x.levels
        ),
        Payload::Tower(x) => match (&x.moduli, &x.presentation) {
            (Some(m), _) => format!("cyclic moduli {m:?}"),
            (_, Some(p)) => format!("{p} at p = {}", x.prime.unwrap_or(0)),
            _ => String::new(),
        },
        Payload::Congruence(x) => format!("d = {}, p = {}, a <= {}", x.d, x.p, x.max_a),
        Payload::Padic(x) => format!("p = {}, a <= {}", x.p, x.max_a),
        Payload::FreeSubgroup(x) => format!("<{}> in F({})", x.subgroup.join(", "), x.names.join(", ")),
        Payload::Nilpotent(x) => format!("rank {}, class {}", x.rank, x.class),
        Payload::Oracle(x) => format!("{} check", x.check),
    }
}

pub fn explain(corpus: &Corpus, cfg: &Config, name: &str) -> Result<String, CliError> {
    let entry = corpus
        .get(name)
        .ok_or_else(|| CliError::UnknownEntry(name.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", entry.name, entry.kind());
    let _ = writeln!(out, "input: {}", input_summary(&entry.payload));
    if !entry.flags.is_empty() {
        let _ = writeln!(out, "flags: {}", entry.flags.join(", "));
    }
    for t in &entry.topics {
        let desc = topic_description(t).unwrap_or("(no description)");
        let _ = writeln!(out, "topic {t}: {desc}");
    }
    let r = run_entry(entry, cfg);
    let _ = writeln!(out, "result: {}", if r.passed { "pass" } else { "FAIL" });
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    for f in &r.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    for (k, v) in &r.fields {
        let mark = if entry.expect.contains_key(k) { "*" } else { " " };
        let _ = writeln!(out, "{mark} {k} = {v}");
    }
    let _ = writeln!(out, "(* marks fields with a recorded expectation)");
    Ok(out)
}
