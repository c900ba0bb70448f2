use prosol_cli::config::Config;
use prosol_cli::corpus::{Corpus, SHIPPED_CORPUS};
use prosol_cli::explain::{explain, topic_description};
use prosol_cli::report::{matches, run_suite};
use prosol_cli::CliError;

#[test]
fn empty_corpus_gives_empty_passing_report() {
    let c = Corpus::parse("").unwrap();
    let r = run_suite(&c, &Config::default(), &[]);
    assert_eq!(r.summary.entries, 0);
    assert!(r.all_passed());
}

#[test]
fn corrupted_certificate_fails_only_its_entry() {
    let text = SHIPPED_CORPUS.replace(
        r#"pi = [[0, "1", 1]]"#,
        r#"pi = [[0, "1", -1]]"#,
    );
    assert_ne!(text, SHIPPED_CORPUS);
    let c = Corpus::parse(&text).unwrap();
    let r = run_suite(&c, &Config::default(), &[]);
    let failed: Vec<&str> = r.entries.iter().filter(|e| !e.passed).map(|e| e.name.as_str()).collect();
    assert_eq!(failed, ["baumslag"]);
    let e = r.entry("baumslag").unwrap();
    assert_eq!(e.fields["certificate_accepted"], false);
}

#[test]
fn evaluation_errors_are_isolated() {
    let text = r#"
[[entry]]
name = "bad-perm"
kind = "permutation-group"
degree = 3
generators = ["(0 7)"]

[[entry]]
name = "ok"
kind = "permutation-group"
degree = 3
generators = ["(0 1 2)"]
expect = { order = "3" }
"#;
    let r = run_suite(&Corpus::parse(text).unwrap(), &Config::default(), &[]);
    assert!(r.entry("bad-perm").unwrap().error.is_some());
    assert!(r.entry("ok").unwrap().passed);
    assert_eq!(r.summary.failed, 1);
}

#[test]
fn parse_errors_carry_line_positions() {
    let text = "[[entry]]\nname = \"x\"\nkind = \"presentation\"\npresentation = \n";
    let e = Corpus::parse(text).unwrap_err();
    assert!(matches!(e, CliError::Corpus(_)));
    assert!(e.to_string().contains("line 4"), "{e}");
}

#[test]
fn malformed_entries_are_rejected() {
    let unknown_kind = "[[entry]]\nname = \"x\"\nkind = \"lattice\"\n";
    assert!(matches!(Corpus::parse(unknown_kind), Err(CliError::Entry { .. })));
    let bad_field = "[[entry]]\nname = \"x\"\nkind = \"padic\"\np = 2\nmax_a = 3\nn = 3\ncolour = 1\n";
    assert!(matches!(Corpus::parse(bad_field), Err(CliError::Entry { .. })));
    let dup = "[[entry]]\nname = \"x\"\nkind = \"oracle\"\ncheck = \"smith\"\n".repeat(2);
    assert!(Corpus::parse(&dup).is_err());
}

#[test]
fn unreported_expectation_fails() {
    let text = "[[entry]]\nname = \"c\"\nkind = \"permutation-group\"\ndegree = 2\ngenerators = [\"(0 1)\"]\nexpect = { colour = \"red\" }\n";
    let r = run_suite(&Corpus::parse(text).unwrap(), &Config::default(), &[]);
    assert!(!r.all_passed());
    assert!(r.entries[0].failures[0].contains("not reported"));
}

#[test]
fn shipped_topics_are_described() {
    let c = Corpus::load(None).unwrap();
    for e in &c.entries {
        assert!(!e.topics.is_empty(), "{} has no topic", e.name);
        for t in &e.topics {
            assert!(topic_description(t).is_some(), "{}: unknown topic {t}", e.name);
        }
    }
}

#[test]
fn draft_entry_is_flagged() {
    let c = Corpus::load(None).unwrap();
    let flagged: Vec<&str> = c
        .entries
        .iter()
        .filter(|e| e.flags.iter().any(|f| f == "draft-notes"))
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(flagged, ["baumslag-draft"]);
}

#[test]
fn explain_prints_input_and_evidence() {
    let c = Corpus::load(None).unwrap();
    let cfg = Config::default();
    let b = explain(&c, &cfg, "baumslag").unwrap();
    assert!(b.contains("a = [a, a^b]"));
    assert!(b.contains("status = \"kernel_contains\""));
    let g = explain(&c, &cfg, "grigorchuk").unwrap();
    assert!(g.contains("two-group-tower"));
    assert!(g.contains("\"4194304\""));
    assert!(matches!(explain(&c, &cfg, "nope"), Err(CliError::UnknownEntry(_))));
}

#[test]
fn expectation_matching() {
    let v = |s: &str| -> toml::Value { toml::from_str::<toml::Table>(&format!("x = {s}")).unwrap()["x"].clone() };
    assert!(matches(&v("\"24\""), &serde_json::json!("24")));
    assert!(matches(&v("24"), &serde_json::json!("24")));
    assert!(matches(&v("24"), &serde_json::json!(24)));
    assert!(!matches(&v("24"), &serde_json::json!(25)));
    assert!(!matches(&v("true"), &serde_json::json!("true")));
    assert!(matches(&v("[[\"0\"], [\"1\"]]"), &serde_json::json!([["0"], ["1"]])));
    assert!(!matches(&v("[1, 2]"), &serde_json::json!([1, 2, 3])));
    assert!(matches(&v("{ 2 = [\"4\"] }"), &serde_json::json!({"2": ["4"]})));
    assert!(!matches(&v("{ 2 = [\"4\"] }"), &serde_json::json!({"2": ["4"], "3": ["9"]})));
}

#[test]
fn seeds_change_sampled_fields_only() {
    let c = Corpus::load(None).unwrap();
    let only = ["oracle-magnus".to_string(), "two-adic".to_string()];
    let a = run_suite(&c, &Config::default(), &only);
    let cfg = Config {
        seed: 7,
        ..Config::default()
    };
    let b = run_suite(&c, &cfg, &only);
    assert!(a.all_passed() && b.all_passed());
    assert_eq!(a.entries[1].fields["distances"], b.entries[1].fields["distances"]);
    assert_ne!(a.to_json(), b.to_json());
}
