//! Evaluation of one corpus entry into a flat map of report fields.

use std::collections::BTreeMap;

use prosol::certify::{prosoluble_kernel_report, DerivedCertificate, VerdictStatus};
use prosol::congruence::{claim_one_scan, layer_structure, reduction_kernel, residual_p_tower};
use prosol::finite::{
    derived_quotient_consistency, perfect_core, prosoluble_completion_finite, series_summary,
    wreath_product, MatrixGroup, ModMatrix, PermGroup, Permutation,
};
use prosol::freequot::{
    lcs_depth, lcs_layer_ranks, magnus_image, nilpotent_surjectivity, subgroup_rank,
    SubgroupGraph, DEFAULT_LAYER_BUDGET,
};
use prosol::oracles::{check_smith_form, enumerate_permutations, necklace_count};
use prosol::tower::{
    abelian_p_tower, canonical_map, completion_comparison, cyclic_tower, metric, padic_grothendieck_demo,
    padic_rank2_demo, power_word, refinement_check, square_digit_padic, ultrametric_check, weighted_sum,
    CoherentSequence, ComparisonSubject, DyadicDistance, QuotientTower,
};
use prosol::treeauto::{
    basilica_group, grigorchuk_group, verify_two_group_tower, Automaton, AutomatonSystem, ChildOrder,
};
use prosol::words::{parse_word, Letter, Presentation, Word};
use prosol::zlattice::{abelianize, smith_normal_form, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::Config;
use crate::corpus::*;

pub type Fields = BTreeMap<String, Value>;

/// Boolean fields that must be `true` whenever they are reported.
pub const INVARIANT_FIELDS: [&str; 13] = [
    "derived_quotient_consistency",
    "chain_matches_enumeration",
    "matrix_closure_matches",
    "ultrametric_passed",
    "weighted_sum_agrees",
    "restrictions_compatible",
    "enumeration_matches",
    "ranks_match_oracle",
    "kernels_match",
    "all_bijective",
    "canonical_coherent",
    "residual_passed",
    "scan_all_invertible",
];

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn evaluate(entry: &Entry, cfg: &Config) -> Result<Fields, String> {
    let mut f = Fields::new();
    match &entry.payload {
        Payload::Presentation(p) => presentation(&entry.name, p, &mut f)?,
        Payload::PermutationGroup(p) => finite_fields(&perm_group(p)?, cfg, &mut f)?,
        Payload::MatrixGroup(p) => matrix_group(p, cfg, &mut f)?,
        Payload::Wreath(p) => {
            let g = wreath_product(&perm_group(&p.base)?, &perm_group(&p.top)?, &u128::from(cfg.caps.wreath_order).into())
                .map_err(err)?;
            f.insert("degree".into(), json!(g.degree()));
            finite_fields(&g, cfg, &mut f)?
        }
        Payload::TreeAutomaton(p) => tree(p, cfg, &mut f)?,
        Payload::Tower(p) => tower(&entry.name, p, cfg, &mut f)?,
        Payload::Congruence(p) => congruence(p, &mut f)?,
        Payload::Padic(p) => padic(p, &mut f)?,
        Payload::FreeSubgroup(p) => free_subgroup(p, &mut f)?,
        Payload::Nilpotent(p) => nilpotent(p, cfg, &mut f)?,
        Payload::Oracle(p) => oracle(&entry.name, p, cfg, &mut f)?,
    }
    Ok(f)
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::String(x.to_string())).collect())
}

fn presentation(name: &str, p: &PresentationPayload, f: &mut Fields) -> Result<(), String> {
    let pres = Presentation::parse(&p.presentation).map_err(err)?;
    let names = pres.names();
    let ab = abelianize(&pres);
    f.insert("generators".into(), json!(names));
    f.insert("abelianization".into(), json!(ab.invariants.to_string()));
    f.insert(
        "generator_images".into(),
        Value::Array(ab.images.iter().map(strings).collect()),
    );
    if !p.words.is_empty() {
        let mut imgs = Vec::new();
        for w in &p.words {
            let w = parse_word(w, &names).map_err(err)?;
            imgs.push(strings(ab.image_of(&w)));
        }
        f.insert("word_images".into(), Value::Array(imgs));
    }
    if !p.expand.is_empty() {
        let mut out = Vec::new();
        for w in &p.expand {
            out.push(parse_word(w, &names).map_err(err)?.reduced().display(&names).to_string());
        }
        f.insert("expanded".into(), json!(out));
    }
    let cert = p
        .certificate
        .as_ref()
        .map(|c| DerivedCertificate::from_spec(c, &pres))
        .transpose()
        .map_err(err)?;
    let verdict = prosoluble_kernel_report(name, &pres, cert.as_ref()).map_err(err)?;
    let status = serde_json::to_value(&verdict.status).map_err(err)?;
    f.insert("status".into(), status["kind"].clone());
    if let VerdictStatus::KernelContains { element } = &verdict.status {
        f.insert("kernel_contains".into(), json!(element));
    }
    f.insert("prosoluble_completion".into(), json!(verdict.prosoluble_completion));
    if let Some(check) = &verdict.certificate {
        f.insert("certificate_accepted".into(), json!(check.accepted));
        f.insert("certificate_residue".into(), json!(check.residue_length));
    }
    if let Some(q) = &verdict.quotient_after_elimination {
        f.insert("quotient_after_elimination".into(), json!(q));
    }
    if let (Some(c), Some(true)) = (&cert, verdict.certificate.as_ref().map(|c| c.accepted)) {
        // The certified element must vanish in every abelian p-tower.
        let mut trivial = true;
        for prime in [2, 3, 5] {
            let t = abelian_p_tower(&pres, prime, 3).map_err(err)?;
            trivial &= canonical_map(&t, &c.target).map_err(err)?.is_identity();
        }
        f.insert("target_trivial_in_p_towers".into(), json!(trivial));
    }
    if !p.compare_primes.is_empty() {
        let r = completion_comparison(
            ComparisonSubject::Presented {
                name,
                presentation: &pres,
                verdict: Some(&verdict),
            },
            &p.compare_primes,
            p.compare_stages,
        )
        .map_err(err)?;
        f.insert("derived_stages".into(), json!(r.derived_stages));
        f.insert("derived_tower_stabilizes".into(), json!(r.derived_tower_stabilizes));
        f.insert("differs_from_finite_soluble".into(), json!(r.differs_from_finite_soluble));
        f.insert("comparison".into(), json!(r.summary));
        let orders: serde_json::Map<String, Value> = r
            .p_towers
            .iter()
            .map(|t| (t.p.to_string(), json!(t.stage_orders)))
            .collect();
        f.insert("p_tower_orders".into(), Value::Object(orders));
        f.insert(
            "p_towers_refine".into(),
            json!(r.p_towers.iter().all(|t| t.strictly_refining)),
        );
    }
    Ok(())
}

pub fn perm_group(p: &PermPayload) -> Result<PermGroup, String> {
    let gens = p
        .generators
        .iter()
        .map(|g| Permutation::parse(p.degree, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    PermGroup::new(p.degree, gens).map_err(err)
}

pub fn finite_fields(g: &PermGroup, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let summary = serde_json::to_value(series_summary(g)).map_err(err)?;
    if let Value::Object(m) = summary {
        f.extend(m);
    }
    let order = g.order_u64().unwrap_or(u64::MAX);
    f.insert("derived_quotient_consistency".into(), json!(derived_quotient_consistency(g).map_err(err)?));
    f.insert(
        "prosoluble_completion_order".into(),
        json!(prosoluble_completion_finite(g).map_err(err)?.order().to_string()),
    );
    f.insert("is_perfect".into(), json!(g.is_perfect()));
    if order <= cfg.caps.lattice as u64 {
        let core = perfect_core(g, cfg.caps.lattice).map_err(err)?;
        f.insert("perfect_core_order".into(), json!(core.order().to_string()));
    }
    if order <= cfg.caps.enumeration as u64 {
        let raw: Vec<Vec<u32>> = g.generators().iter().map(|p| p.images().to_vec()).collect();
        let all = enumerate_permutations(g.degree(), &raw, cfg.caps.enumeration)
            .ok_or("enumeration exceeded its cap")?;
        f.insert(
            "chain_matches_enumeration".into(),
            json!(order == all.len() as u64),
        );
    }
    Ok(())
}

fn matrix_group(p: &MatrixPayload, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let gens = p
        .generators
        .iter()
        .map(|rows| ModMatrix::from_rows(p.modulus, rows))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let d = gens.first().map(ModMatrix::dim).ok_or("matrix group needs a generator")?;
    let m = MatrixGroup::new(d, p.modulus, gens).map_err(err)?;
    let closure = m.order(cfg.caps.matrix_elements).map_err(err)?;
    let g = m.to_permutation_group(cfg.caps.max_degree).map_err(err)?;
    f.insert("matrix_order".into(), json!(closure.to_string()));
    f.insert(
        "matrix_closure_matches".into(),
        json!(g.order_u64() == Some(closure)),
    );
    finite_fields(&g, cfg, f)
}

pub fn automaton_system(p: &TreePayload) -> Result<AutomatonSystem, String> {
    match p.builtin.as_deref() {
        Some("grigorchuk") => Ok(grigorchuk_group(ChildOrder::Standard)),
        Some("grigorchuk-swapped") => Ok(grigorchuk_group(ChildOrder::Swapped)),
        Some("basilica") => Ok(basilica_group()),
        Some(other) => Err(format!("unknown builtin automaton `{other}`")),
        None => Ok(AutomatonSystem {
            name: "custom".into(),
            automaton: Automaton::from_specs(&p.states).map_err(err)?,
            generators: p.generators.clone(),
        }),
    }
}

fn tree(p: &TreePayload, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let sys = automaton_system(p)?;
    for g in &sys.generators {
        sys.automaton.state(g).map_err(err)?;
    }
    let r = verify_two_group_tower(&sys, p.levels, cfg.caps.max_level).map_err(err)?;
    f.insert("level_orders".into(), json!(r.levels.iter().map(|l| &l.order).collect::<Vec<_>>()));
    f.insert(
        "log2_orders".into(),
        json!(r.levels.iter().map(|l| l.log2_order).collect::<Vec<_>>()),
    );
    f.insert("all_two_groups".into(), json!(r.all_two_groups));
    f.insert("all_nilpotent".into(), json!(r.all_nilpotent));
    f.insert("restrictions_compatible".into(), json!(r.restrictions_compatible));
    f.insert("derived_lengths_monotone".into(), json!(r.derived_lengths_monotone));
    f.insert(
        "nilpotency_classes".into(),
        json!(r.levels.iter().map(|l| l.nilpotency_class).collect::<Vec<_>>()),
    );
    f.insert(
        "derived_lengths".into(),
        json!(r.levels.iter().map(|l| l.derived_length).collect::<Vec<_>>()),
    );
    // Naive closure on the small levels.
    let mut matches = true;
    for n in 1..=p.levels.min(3) {
        let imgs = sys.generator_images(n, cfg.caps.max_level).map_err(err)?;
        let raw: Vec<Vec<u32>> = imgs.iter().map(|q| q.images().to_vec()).collect();
        let all = enumerate_permutations(1 << n, &raw, 1 << 20).ok_or("level too large to enumerate")?;
        matches &= all.len().to_string() == r.levels[n - 1].order;
    }
    f.insert("enumeration_matches".into(), json!(matches));
    Ok(())
}

fn random_word(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters(
        (0..len)
            .map(|_| Letter::new(rng.gen_range(0..k), rng.gen_bool(0.5)))
            .collect(),
    )
}

pub fn build_tower(name: &str, p: &TowerPayload) -> Result<QuotientTower, String> {
    match (&p.moduli, &p.presentation) {
        (Some(m), None) => cyclic_tower(name, m).map_err(err),
        (None, Some(text)) => {
            let pres = Presentation::parse(text).map_err(err)?;
            let prime = p.prime.ok_or("presentation towers need `prime`")?;
            abelian_p_tower(&pres, prime, p.max_a.unwrap_or(4)).map_err(err)
        }
        _ => Err("tower needs exactly one of `moduli` or `presentation`".into()),
    }
}

/// `metric` cross-checked against the weighted series evaluated stage by stage.
fn checked_distance(t: &QuotientTower, x: &Word, y: &Word) -> Result<(DyadicDistance, bool), String> {
    let d = metric(t, x, y).map_err(err)?;
    let gamma = x.inverse().concat(y);
    let flags = (0..t.depth())
        .map(|i| t.evaluate(i, &gamma).map(|g| g.is_identity()))
        .collect::<Result<Vec<bool>, _>>()
        .map_err(err)?;
    let agrees = match (d, weighted_sum(&flags)) {
        (DyadicDistance::Exact { exponent }, Some((num, den))) => {
            num == 1u32.into() && Some(den) == d.denominator() && exponent < t.depth() as u32
        }
        (DyadicDistance::ZeroUpTo(_), None) => true,
        _ => false,
    };
    Ok((d, agrees))
}

fn tower(name: &str, p: &TowerPayload, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let t = build_tower(name, p)?;
    let k = t.generators.len();
    f.insert("stage_orders".into(), strings(t.stage_orders()));
    let mut agrees = true;
    if !p.distances.is_empty() {
        if p.moduli.is_none() {
            return Err("`distances` needs a cyclic tower".into());
        }
        let mut out = Vec::new();
        for &(x, y) in &p.distances {
            let (d, ok) = checked_distance(&t, &power_word(x), &power_word(y))?;
            agrees &= ok;
            out.push(d.to_string());
        }
        f.insert("distances".into(), json!(out));
    }
    if !p.word_distances.is_empty() {
        let mut out = Vec::new();
        for (x, y) in &p.word_distances {
            let x = parse_word(x, &t.generators).map_err(err)?;
            let y = parse_word(y, &t.generators).map_err(err)?;
            let (d, ok) = checked_distance(&t, &x, &y)?;
            agrees &= ok;
            out.push(d.to_string());
        }
        f.insert("word_distances".into(), json!(out));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.entry_seed(name));
    let sample: Vec<Word> = (0..cfg.metric.sample_size)
        .map(|_| random_word(&mut rng, k, cfg.metric.max_word_length))
        .collect();
    for x in &sample {
        for y in &sample {
            agrees &= checked_distance(&t, x, y)?.1;
        }
    }
    f.insert("weighted_sum_agrees".into(), json!(agrees));
    let u = ultrametric_check(&t, &sample).map_err(err)?;
    f.insert("ultrametric_passed".into(), json!(u.passed()));
    f.insert("triples_checked".into(), json!(u.triples_checked));
    if let Some(m) = &p.refine_with {
        let other = cyclic_tower("refinement", m).map_err(err)?;
        let r = refinement_check(&t, &other).map_err(err)?;
        f.insert("refined_by_other".into(), json!(r.coarse_refined_by_fine));
        f.insert("refines_other".into(), json!(r.fine_refined_by_coarse));
        f.insert("same_topology".into(), json!(r.same_topology));
    }
    if !p.canonical.is_empty() {
        let mut coherent = true;
        let mut identity = Vec::new();
        for w in &p.canonical {
            let w = parse_word(w, &t.generators).map_err(err)?;
            let s = canonical_map(&t, &w).map_err(err)?;
            coherent &= CoherentSequence::new(&t, s.elements.clone()).is_ok();
            identity.push(s.is_identity());
        }
        f.insert("canonical_coherent".into(), json!(coherent));
        f.insert("canonical_identity".into(), json!(identity));
    }
    Ok(())
}

fn congruence(p: &CongruencePayload, f: &mut Fields) -> Result<(), String> {
    for v in &p.variants {
        let key = v.to_string().to_lowercase();
        let (mut orders, mut expected, mut elementary, mut additive) = (vec![], vec![], vec![], true);
        for a in 2..=p.max_a {
            let layer = reduction_kernel(p.d, p.p, a, *v).map_err(err)?;
            let r = layer_structure(&layer);
            orders.push(r.order);
            expected.push(r.expected_order);
            elementary.push(r.elementary_abelian);
            additive &= r.additive_bijection && r.additive_homomorphism;
        }
        f.insert(format!("{key}_layer_orders"), json!(orders));
        f.insert(format!("{key}_expected_orders"), json!(expected));
        f.insert(format!("{key}_elementary_abelian"), json!(elementary));
        f.insert(format!("{key}_additive"), json!(additive));
    }
    if p.residual {
        let (r, _) = residual_p_tower(p.d, p.p, p.max_a).map_err(err)?;
        f.insert("residual_orders".into(), json!(r.orders));
        f.insert("residual_expected_orders".into(), json!(r.expected_orders));
        f.insert("residual_layer_orders".into(), json!(r.layer_orders));
        f.insert("residual_p_groups".into(), json!(r.p_groups.iter().all(|&b| b)));
        f.insert("residual_passed".into(), json!(r.passed()));
    }
    if p.scan {
        let mut all = true;
        for a in 1..=p.max_a {
            all &= claim_one_scan(p.d, p.p, a).map_err(err)?.all_invertible;
        }
        f.insert("scan_all_invertible".into(), json!(all));
    }
    Ok(())
}

fn padic(p: &PadicPayload, f: &mut Fields) -> Result<(), String> {
    if let Some(n) = p.n {
        let r = padic_grothendieck_demo(p.p, n, p.max_a).map_err(err)?;
        f.insert("moduli".into(), json!(r.stages.iter().map(|s| &s.modulus).collect::<Vec<_>>()));
        f.insert("inverses".into(), json!(r.stages.iter().map(|s| &s.inverse).collect::<Vec<_>>()));
        f.insert("all_bijective".into(), json!(r.all_bijective));
        f.insert(
            "exhaustive_stages".into(),
            json!(r.stages.iter().filter(|s| s.exhaustive).count()),
        );
    }
    if let Some(input) = &p.rank2 {
        let x: Vec<u64> = match input {
            Rank2Input::Named(s) if s == "square-digits" => (0..=p.max_a).map(|a| square_digit_padic(p.p, a)).collect(),
            Rank2Input::Named(s) => return Err(format!("unknown rank-2 input `{s}`")),
            Rank2Input::Explicit(v) => v.clone(),
        };
        let r = padic_rank2_demo(p.p, &x, p.max_a);
        f.insert(
            "kernel_sizes".into(),
            json!(r.stages.iter().map(|s| &s.kernel_size).collect::<Vec<_>>()),
        );
        f.insert("kernels_nontrivial".into(), json!(r.kernels_nontrivial));
        f.insert(
            "kernels_match".into(),
            json!(r.stages.iter().all(|s| s.kernel_size == s.expected)),
        );
    }
    Ok(())
}

fn free_subgroup(p: &FreeSubgroupPayload, f: &mut Fields) -> Result<(), String> {
    let gens = p
        .subgroup
        .iter()
        .map(|w| parse_word(w, &p.names))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let graph = SubgroupGraph::from_generators(&gens);
    f.insert("subgroup_rank".into(), json!(subgroup_rank(&gens)));
    f.insert("graph_vertices".into(), json!(graph.vertex_count()));
    let mut member = Vec::new();
    for q in &p.queries {
        member.push(graph.contains(&parse_word(q, &p.names).map_err(err)?));
    }
    f.insert("membership".into(), json!(member));
    f.insert(
        "nilpotent_surjectivity".into(),
        json!(nilpotent_surjectivity(&gens, p.names.len(), p.class)),
    );
    Ok(())
}

/// Generator names `x, y, z, w, u, v, …` for rank `k`.
pub fn default_names(k: usize) -> Vec<String> {
    const BASE: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    (0..k)
        .map(|i| BASE.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}")))
        .collect()
}

fn nilpotent(p: &NilpotentPayload, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let ranks = lcs_layer_ranks(p.rank, p.class, cfg.caps.max_class, DEFAULT_LAYER_BUDGET).map_err(err)?;
    let oracle: Vec<u64> = (1..=p.class as u32).map(|j| necklace_count(p.rank as u64, j)).collect();
    f.insert(
        "ranks_match_oracle".into(),
        json!(ranks.iter().zip(&oracle).all(|(&a, &b)| a as u64 == b)),
    );
    f.insert("layer_ranks".into(), json!(ranks));
    f.insert("necklace_ranks".into(), json!(oracle));
    if !p.words.is_empty() {
        let names = default_names(p.rank);
        let mut depths = Vec::new();
        for w in &p.words {
            let w = parse_word(w, &names).map_err(err)?;
            depths.push(lcs_depth(&w, p.rank, p.cutoff).to_string());
        }
        f.insert("lcs_depths".into(), json!(depths));
    }
    Ok(())
}

fn oracle(name: &str, p: &OraclePayload, cfg: &Config, f: &mut Fields) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.entry_seed(name));
    let o = &cfg.oracle;
    let mut mismatches = 0usize;
    let mut first = None;
    let samples = match p.check.as_str() {
        "smith" => {
            for _ in 0..o.smith_samples {
                let r = rng.gen_range(1..=o.smith_max_dim);
                let c = rng.gen_range(1..=o.smith_max_dim);
                let b = o.smith_entry_bound;
                let mut rows: Vec<Vec<i64>> = (0..r)
                    .map(|_| (0..c).map(|_| rng.gen_range(-b..=b)).collect())
                    .collect();
                // Some dependent rows, for rank deficiency and torsion.
                if r >= 3 && rng.gen_bool(0.3) {
                    let s = rng.gen_range(2..=3);
                    rows[r - 1] = (0..c).map(|j| s * (rows[0][j] + rows[1][j])).collect();
                }
                let m = IntMatrix::from_rows(c, &rows);
                let snf = smith_normal_form(&m);
                if let Err(e) = check_smith_form(&m, &snf.u, &snf.d, &snf.v) {
                    mismatches += 1;
                    first.get_or_insert_with(|| format!("{rows:?}: {e}"));
                }
            }
            o.smith_samples
        }
        "magnus" => {
            for _ in 0..o.magnus_pairs {
                let k = rng.gen_range(2..=3);
                let u = random_word(&mut rng, k, 12);
                let v = random_word(&mut rng, k, 12);
                let lhs = magnus_image(&u.mul(&v), k, o.magnus_cutoff);
                let rhs = magnus_image(&u, k, o.magnus_cutoff).mul(&magnus_image(&v, k, o.magnus_cutoff));
                if lhs.terms() != rhs.terms() {
                    mismatches += 1;
                    first.get_or_insert_with(|| format!("{u:?} {v:?}"));
                }
            }
            o.magnus_pairs
        }
        other => return Err(format!("unknown oracle check `{other}`")),
    };
    f.insert("samples".into(), json!(samples));
    f.insert("mismatches".into(), json!(mismatches));
    if let Some(x) = first {
        f.insert("first_mismatch".into(), json!(x));
    }
    Ok(())
}
