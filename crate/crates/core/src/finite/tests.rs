use super::*;
use crate::oracles::{enumerate_permutations, perfect_core_by_lattice};
use proptest::prelude::*;

fn p(n: usize, s: &str) -> Permutation {
    Permutation::parse(n, s).unwrap()
}

fn group(n: usize, gens: &[&str]) -> PermGroup {
    PermGroup::new(n, gens.iter().map(|s| p(n, s)).collect()).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn orders(s: &NormalSeries) -> Vec<u64> {
    s.orders().iter().map(|x| x.to_u64().unwrap()).collect()
}

fn enum_order(g: &PermGroup) -> usize {
    let raw: Vec<Vec<u32>> = g.generators().iter().map(|x| x.images().to_vec()).collect();
    enumerate_permutations(g.degree(), &raw, 1 << 22).unwrap().len()
}

fn a5_times_c6() -> PermGroup {
    PermGroup::alternating(5).direct_product(&PermGroup::cyclic(6))
}

#[test]
fn order_examples() {
    assert_eq!(group(4, &["(0 1)", "(0 1 2 3)"]).order(), big(24));
    assert_eq!(PermGroup::trivial(5).order(), big(1));
    assert_eq!(group(5, &["(0 1 2 3 4)", "(0 1 2)"]).order(), big(60));
    assert_eq!(PermGroup::dihedral(4).order(), big(8));
    assert_eq!(PermGroup::alternating(6).order(), big(360));
}

#[test]
fn normal_closure_examples() {
    let s4 = PermGroup::symmetric(4);
    let v4 = normal_closure(&s4, &[p(4, "(0 1)(2 3)")]);
    assert_eq!(v4.order(), big(4));
    assert!(v4.is_normal_in(&s4));
    assert!(normal_closure(&s4, &[s4.identity()]).order().is_one());
    let a5 = PermGroup::alternating(5);
    for s in ["(0 1 2)", "(0 1)(2 3)", "(0 1 2 3 4)"] {
        assert_eq!(normal_closure(&a5, &[p(5, s)]).order(), big(60));
    }
}

#[test]
fn derived_series_examples() {
    let s4 = derived_series(&PermGroup::symmetric(4));
    assert_eq!(orders(&s4), vec![24, 12, 4, 1]);
    assert_eq!(s4.length(), Some(3));
    let a5 = derived_series(&PermGroup::alternating(5));
    assert_eq!(orders(&a5), vec![60]);
    assert!(a5.stabilized && !a5.reaches_trivial());
    let c6 = derived_series(&PermGroup::cyclic(6));
    assert_eq!(orders(&c6), vec![6, 1]);
}

#[test]
fn lower_central_examples() {
    let d4 = lower_central_series(&PermGroup::dihedral(4));
    assert_eq!(orders(&d4), vec![8, 2, 1]);
    assert_eq!(d4.length(), Some(2));
    let s3 = lower_central_series(&PermGroup::symmetric(3));
    assert_eq!(orders(&s3), vec![6, 3]);
    assert!(s3.stabilized && !s3.reaches_trivial());
    let c = lower_central_series(&PermGroup::cyclic(5));
    assert_eq!(orders(&c), vec![5, 1]);
}

#[test]
fn residual_and_core_examples() {
    let s5 = PermGroup::symmetric(5);
    assert_eq!(soluble_residual(&s5).order(), big(60));
    assert!(soluble_residual(&PermGroup::symmetric(4)).order().is_one());
    assert_eq!(soluble_residual(&a5_times_c6()).order(), big(60));
    assert_eq!(perfect_core(&s5, DEFAULT_LATTICE_CAP).unwrap().order(), big(60));
    assert!(perfect_core(&PermGroup::symmetric(4), DEFAULT_LATTICE_CAP)
        .unwrap()
        .order()
        .is_one());
    let a5 = PermGroup::alternating(5);
    assert_eq!(perfect_core(&a5, DEFAULT_LATTICE_CAP).unwrap().order(), big(60));
    assert!(matches!(
        perfect_core(&PermGroup::symmetric(7), DEFAULT_LATTICE_CAP),
        Err(FiniteError::CapExceeded { .. })
    ));
}

#[test]
fn completion_examples() {
    assert_eq!(
        prosoluble_completion_finite(&PermGroup::symmetric(5)).unwrap().order(),
        big(2)
    );
    assert!(prosoluble_completion_finite(&PermGroup::alternating(5))
        .unwrap()
        .order()
        .is_one());
    let c6 = PermGroup::cyclic(6);
    assert_eq!(prosoluble_completion_finite(&c6).unwrap().order(), big(6));
    let q = prosoluble_completion_finite(&a5_times_c6()).unwrap();
    assert_eq!(q.order(), big(6));
    assert!(q.is_abelian());
}

#[test]
fn consistency_examples() {
    assert!(derived_quotient_consistency(&PermGroup::symmetric(5)).unwrap());
    assert!(derived_quotient_consistency(&PermGroup::symmetric(4)).unwrap());
    let g = PermGroup::alternating(5).direct_product(&PermGroup::symmetric(3));
    assert!(derived_quotient_consistency(&g).unwrap());
    let q = prosoluble_completion_finite(&g).unwrap();
    assert_eq!(orders(&derived_series(&q)), vec![6, 3, 1]);
}

#[test]
fn wreath_examples() {
    let cap = big(1 << 40);
    let c2 = PermGroup::cyclic(2);
    let w = wreath_product(&c2, &c2, &cap).unwrap();
    assert_eq!(w.order(), big(8));
    assert_eq!(orders(&lower_central_series(&w)), vec![8, 2, 1]);
    let s3 = PermGroup::symmetric(3);
    let same = wreath_product(&s3, &PermGroup::trivial(1), &cap).unwrap();
    assert_eq!(same.order(), big(6));
    let w = wreath_product(&s3, &PermGroup::cyclic(3), &cap).unwrap();
    assert_eq!(w.order(), big(648));
    assert_eq!(derived_series(&w).length(), Some(3));
    assert!(wreath_product(&s3, &PermGroup::cyclic(3), &big(100)).is_err());
}

#[test]
fn quotient_action_is_faithful() {
    let s4 = PermGroup::symmetric(4);
    let v4 = normal_closure(&s4, &[p(4, "(0 1)(2 3)")]);
    let (q, imgs) = s4.quotient_by_normal(&v4, 100).unwrap();
    assert_eq!(q.order(), big(6));
    assert_eq!(imgs.len(), 2);
    let not_normal = group(4, &["(0 1)"]);
    assert_eq!(
        s4.quotient_by_normal(&not_normal, 100).unwrap_err(),
        FiniteError::NotNormal
    );
}

#[test]
fn homomorphisms_by_graph() {
    let s4 = PermGroup::symmetric(4);
    let s3 = PermGroup::symmetric(3);
    // S4 -> S3 through the action on the three pair partitions.
    let v4 = normal_closure(&s4, &[p(4, "(0 1)(2 3)")]);
    let (q, imgs) = s4.quotient_by_normal(&v4, 100).unwrap();
    let h = Homomorphism::new(&s4, &q, imgs).unwrap();
    assert!(h.is_well_defined());
    assert!(h.is_surjective());
    assert_eq!(h.kernel_order(), big(4));
    for x in s4.elements(24).unwrap() {
        let y = h.apply(&x).unwrap();
        assert_eq!(y.is_identity(), v4.contains(&x));
    }
    // Sending both generators of S3 to a 3-cycle is not a homomorphism.
    let c = p(3, "(0 1 2)");
    let bad = Homomorphism::new(&s3, &s3, vec![c.clone(), c]).unwrap();
    assert!(!bad.is_well_defined());
    // Sign map.
    let c2 = PermGroup::cyclic(2);
    let t = p(2, "(0 1)");
    let sign = Homomorphism::new(&s4, &c2, vec![t.clone(), t]).unwrap();
    assert!(sign.is_well_defined() && sign.is_surjective());
    assert!(sign.apply(&p(4, "(0 1 2)")).unwrap().is_identity());
    assert!(!sign.apply(&p(4, "(0 1 2 3)")).unwrap().is_identity());
}

#[test]
fn matrix_groups_feed_the_chain() {
    let a = ModMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]]).unwrap();
    let b = ModMatrix::from_rows(2, &[vec![1, 0], vec![1, 1]]).unwrap();
    let m = MatrixGroup::new(2, 2, vec![a, b]).unwrap();
    let fg = FiniteGroup::Matrix(m);
    assert_eq!(fg.order(100).unwrap(), big(6));
    let pg = fg.to_perm_group(16).unwrap();
    assert_eq!(pg.order(), big(6));
    assert_eq!(orders(&derived_series(&pg)), vec![6, 3, 1]);
}

#[test]
fn summary_fields() {
    let s = series_summary(&PermGroup::symmetric(4));
    assert!(s.is_soluble && !s.is_nilpotent);
    assert_eq!(s.derived_length, Some(3));
    assert_eq!(s.nilpotency_class, None);
    assert_eq!(s.soluble_residual_order, "1");
}

/// Finite groups exercised by the structural invariants below.
fn corpus() -> Vec<PermGroup> {
    let cap = big(1 << 40);
    vec![
        PermGroup::symmetric(3),
        PermGroup::symmetric(4),
        PermGroup::symmetric(5),
        PermGroup::alternating(4),
        PermGroup::alternating(5),
        PermGroup::cyclic(6),
        PermGroup::dihedral(4),
        PermGroup::dihedral(6),
        a5_times_c6(),
        PermGroup::alternating(5).direct_product(&PermGroup::symmetric(3)),
        wreath_product(&PermGroup::cyclic(2), &PermGroup::cyclic(2), &cap).unwrap(),
        wreath_product(&PermGroup::symmetric(3), &PermGroup::cyclic(3), &cap).unwrap(),
        wreath_product(&PermGroup::cyclic(3), &PermGroup::symmetric(3), &cap).unwrap(),
        group(6, &["(0 1 2)(3 4 5)", "(0 3)(1 4)(2 5)"]),
        group(8, &["(0 1 2 3)(4 5 6 7)", "(0 4)(1 7)(2 6)(3 5)"]),
    ]
}

#[test]
fn series_terms_are_normal_and_residual_is_perfect() {
    for g in corpus() {
        for s in [derived_series(&g), lower_central_series(&g)] {
            for h in &s.groups {
                assert!(h.is_normal_in(&g));
            }
        }
        let r = soluble_residual(&g);
        assert!(r.is_perfect());
        assert!(derived_quotient_consistency(&g).unwrap());
    }
}

#[test]
fn chain_order_matches_enumeration_on_corpus() {
    for g in corpus() {
        if g.order() <= big(5000) {
            assert_eq!(g.order(), big(enum_order(&g) as u64));
        }
    }
}

#[test]
fn core_equals_residual_on_small_corpus() {
    for g in corpus() {
        if g.order() <= big(400) {
            let lat = perfect_core_by_lattice(&g, 400).unwrap();
            assert_eq!(big(lat.len() as u64), soluble_residual(&g).order());
        }
    }
}

#[test]
fn soluble_wreaths_have_bounded_length() {
    let cap = big(1 << 40);
    let pieces = [
        PermGroup::cyclic(2),
        PermGroup::cyclic(3),
        PermGroup::symmetric(3),
        PermGroup::dihedral(4),
    ];
    for s in &pieces {
        for t in &pieces {
            let w = wreath_product(s, t, &cap).unwrap();
            let ls = derived_series(s).length().unwrap();
            let lt = derived_series(t).length().unwrap();
            let lw = derived_series(&w).length().expect("soluble");
            assert!(lw <= ls + lt, "{lw} > {ls} + {lt}");
        }
    }
}

fn random_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_groups_match_enumeration(gens in prop::collection::vec(random_perm(6), 1..4)) {
        let g = PermGroup::new(6, gens).unwrap();
        prop_assert_eq!(g.order(), big(enum_order(&g) as u64));
        prop_assert!(soluble_residual(&g).is_perfect());
        prop_assert!(derived_quotient_consistency(&g).unwrap());
    }

    #[test]
    fn lower_central_terms_are_normal(gens in prop::collection::vec(random_perm(5), 1..3)) {
        let g = PermGroup::new(5, gens).unwrap();
        for h in &lower_central_series(&g).groups {
            prop_assert!(h.is_normal_in(&g));
        }
    }
}
