use prosol::certify::{prosoluble_kernel_report, CertificateSpec, DerivedCertificate, VerdictStatus};
use prosol::finite::{series_summary, PermGroup, Permutation};
use prosol::freequot::{subgroup_rank, SubgroupGraph};
use prosol::tower::{abelian_p_tower, canonical_map, cyclic_tower, metric, power_word};
use prosol::words::{parse_word, Presentation};
use prosol::zlattice::abelianize;

#[test]
fn baumslag_from_text_to_towers() {
    let p = Presentation::parse("<a, b | a = [a, a^b]>").unwrap();
    assert_eq!(abelianize(&p).invariants.to_string(), "Z");
    let spec: CertificateSpec =
        serde_json::from_str(r#"{"target": "a", "w1": "g", "w2": "g^(b)", "pi": [[0, "1", 1]]}"#).unwrap();
    let cert = DerivedCertificate::from_spec(&spec, &p).unwrap();
    let v = prosoluble_kernel_report("baumslag", &p, Some(&cert)).unwrap();
    assert_eq!(v.status, VerdictStatus::KernelContains { element: "a".into() });
    let a = parse_word("a", &p.names()).unwrap();
    let b = parse_word("b", &p.names()).unwrap();
    for prime in [2, 3, 5, 7] {
        let t = abelian_p_tower(&p, prime, 3).unwrap();
        assert!(canonical_map(&t, &a).unwrap().is_identity());
        assert!(!canonical_map(&t, &b).unwrap().is_identity());
    }
}

#[test]
fn two_adic_distance_from_public_api() {
    let t = cyclic_tower("Z_2", &[2, 4, 8, 16]).unwrap();
    let d = metric(&t, &power_word(0), &power_word(4)).unwrap();
    assert_eq!(d.to_string(), "1/4");
}

#[test]
fn s4_series_from_cycle_notation() {
    let gens = ["(0 1)", "(0 1 2 3)"].map(|s| Permutation::parse(4, s).unwrap());
    let g = PermGroup::new(4, gens.to_vec()).unwrap();
    let s = serde_json::to_value(series_summary(&g)).unwrap();
    assert_eq!(s["order"], "24");
    assert_eq!(s["derived_orders"], serde_json::json!(["24", "12", "4", "1"]));
}

#[test]
fn parafree_subgroup_from_text() {
    let names: Vec<String> = ["x", "y"].map(String::from).to_vec();
    let gens: Vec<_> = ["x", "y x y x^-1 y^-1"].iter().map(|w| parse_word(w, &names).unwrap()).collect();
    assert_eq!(subgroup_rank(&gens), 2);
    let g = SubgroupGraph::from_generators(&gens);
    assert!(!g.contains(&parse_word("y", &names).unwrap()));
    assert!(g.contains(&parse_word("x^-2 y x y x^-1 y^-1 x", &names).unwrap()));
}
