//! Automorphisms of the rooted binary tree given by finite automata.
//!
//! A state is a root permutation of `{0, 1}` together with one child state per
//! input letter: the state acts on `x w` as `(x ^ swap) · child[x](w)`. Level-`n`
//! vertices are the words of length `n`, indexed with the first letter as the
//! most significant bit.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite::{
    biguint_is_power_of, derived_series, lower_central_series, PermGroup, Permutation,
};

/// Default largest level for restrictions.
pub const DEFAULT_MAX_LEVEL: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("level {level} outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("state `{0}`: root permutation must be `()` or `(0 1)`, got `{1}`")]
    BadPermutation(String, String),
    #[error("state `{0}` needs exactly two children")]
    BadChildren(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub name: String,
    pub swap: bool,
    pub children: [usize; 2],
}

/// A finite automaton over the binary alphabet; every state is an automorphism.
#[derive(Debug)]
pub struct Automaton {
    states: Vec<State>,
    index: HashMap<String, usize>,
    memo: Mutex<HashMap<(usize, usize), Permutation>>,
}

impl Clone for Automaton {
    fn clone(&self) -> Self {
        Automaton {
            states: self.states.clone(),
            index: self.index.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

/// File-level description: `perm` is `()` or `(0 1)`, `children` names the
/// child for input `0` and for input `1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpec {
    pub name: String,
    pub perm: String,
    pub children: Vec<String>,
}

impl Automaton {
    pub fn new(states: Vec<State>) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), i))
            .collect();
        Automaton {
            states,
            index,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_specs(specs: &[StateSpec]) -> Result<Self, TreeError> {
        let mut index = HashMap::new();
        for (i, s) in specs.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(TreeError::DuplicateState(s.name.clone()));
            }
        }
        let mut states = Vec::with_capacity(specs.len());
        for s in specs {
            let compact: String = s.perm.chars().filter(|c| !c.is_whitespace()).collect();
            let swap = match compact.as_str() {
                "()" | "" | "id" => false,
                "(01)" | "(0,1)" | "(10)" | "swap" => true,
                _ => return Err(TreeError::BadPermutation(s.name.clone(), s.perm.clone())),
            };
            if s.children.len() != 2 {
                return Err(TreeError::BadChildren(s.name.clone()));
            }
            let mut ch = [0; 2];
            for (k, c) in s.children.iter().enumerate() {
                ch[k] = *index
                    .get(c)
                    .ok_or_else(|| TreeError::UnknownState(c.clone()))?;
            }
            states.push(State {
                name: s.name.clone(),
                swap,
                children: ch,
            });
        }
        Ok(Self::new(states))
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, name: &str) -> Result<usize, TreeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| TreeError::UnknownState(name.to_string()))
    }

    /// Permutation induced by state `s` on the `2^n` vertices of level `n`.
    pub fn level_permutation(&self, s: usize, n: usize) -> Permutation {
        if n == 0 {
            return Permutation::identity(1);
        }
        if let Some(p) = self.memo.lock().unwrap().get(&(s, n)) {
            return p.clone();
        }
        let st = &self.states[s];
        let half = 1usize << (n - 1);
        let kids = [
            self.level_permutation(st.children[0], n - 1),
            self.level_permutation(st.children[1], n - 1),
        ];
        let mut img = vec![0u32; 2 * half];
        for (i, slot) in img.iter_mut().enumerate() {
            let x = i / half;
            let rest = i % half;
            let y = x ^ st.swap as usize;
            *slot = (y * half + kids[x].image(rest)) as u32;
        }
        let p = Permutation::from_images(img).expect("automaton induces a bijection");
        self.memo.lock().unwrap().insert((s, n), p.clone());
        p
    }
}

/// One state of an automaton, viewed as a tree automorphism.
#[derive(Debug, Clone)]
pub struct TreeAutomorphism {
    pub automaton: Automaton,
    pub initial: usize,
}

impl TreeAutomorphism {
    pub fn identity() -> Self {
        TreeAutomorphism {
            automaton: Automaton::new(vec![State {
                name: "e".into(),
                swap: false,
                children: [0, 0],
            }]),
            initial: 0,
        }
    }

    /// The automorphism swapping the two subtrees at the root and nothing else.
    pub fn root_swap() -> Self {
        TreeAutomorphism {
            automaton: Automaton::new(vec![
                State {
                    name: "s".into(),
                    swap: true,
                    children: [1, 1],
                },
                State {
                    name: "e".into(),
                    swap: false,
                    children: [1, 1],
                },
            ]),
            initial: 0,
        }
    }

    pub fn of_state(automaton: &Automaton, name: &str) -> Result<Self, TreeError> {
        Ok(TreeAutomorphism {
            initial: automaton.state(name)?,
            automaton: automaton.clone(),
        })
    }

    pub fn restrict(&self, n: usize, max_level: usize) -> Result<Permutation, TreeError> {
        level_restriction(self, n, max_level)
    }

    /// `self` followed by `other`, as the product automaton on reachable pairs.
    pub fn then(&self, other: &TreeAutomorphism) -> TreeAutomorphism {
        let a = &self.automaton.states;
        let b = &other.automaton.states;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut states = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (s, t) = pairs[i];
            let mut ch = [0; 2];
            for (x, slot) in ch.iter_mut().enumerate() {
                let next = (a[s].children[x], b[t].children[x ^ a[s].swap as usize]);
                *slot = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
            }
            states.push(State {
                name: format!("{}.{}", a[s].name, b[t].name),
                swap: a[s].swap ^ b[t].swap,
                children: ch,
            });
            i += 1;
        }
        TreeAutomorphism {
            automaton: Automaton::new(states),
            initial: 0,
        }
    }
}

/// Induced permutation of level `n`.
pub fn level_restriction(
    a: &TreeAutomorphism,
    n: usize,
    max_level: usize,
) -> Result<Permutation, TreeError> {
    if n == 0 || n > max_level {
        return Err(TreeError::LevelOutOfRange {
            level: n,
            max: max_level,
        });
    }
    Ok(a.automaton.level_permutation(a.initial, n))
}

/// Image of a level-`(n+1)` permutation on level `n` (drop the last letter).
pub fn project(p: &Permutation) -> Permutation {
    let half = p.degree() / 2;
    let img = (0..half).map(|i| (p.image(2 * i) / 2) as u32).collect();
    Permutation::from_images(img).expect("projection of a tree automorphism")
}

/// An automaton with a list of named generating states.
#[derive(Debug, Clone)]
pub struct AutomatonSystem {
    pub name: String,
    pub automaton: Automaton,
    pub generators: Vec<String>,
}

/// Child order for the Grigorchuk recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChildOrder {
    /// `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
    #[default]
    Standard,
    /// `b = (c, a)`, `c = (d, a)`, `d = (b, 1)`.
    Swapped,
}

fn spec(name: &str, perm: &str, children: [&str; 2]) -> StateSpec {
    StateSpec {
        name: name.into(),
        perm: perm.into(),
        children: children.iter().map(|s| s.to_string()).collect(),
    }
}

/// The first Grigorchuk group on generators `a, b, c, d`.
pub fn grigorchuk_group(order: ChildOrder) -> AutomatonSystem {
    let kids = |l: &'static str, r: &'static str| match order {
        ChildOrder::Standard => [l, r],
        ChildOrder::Swapped => [r, l],
    };
    let specs = vec![
        spec("e", "()", ["e", "e"]),
        spec("a", "(0 1)", ["e", "e"]),
        spec("b", "()", kids("a", "c")),
        spec("c", "()", kids("a", "d")),
        spec("d", "()", kids("e", "b")),
    ];
    AutomatonSystem {
        name: "grigorchuk".into(),
        automaton: Automaton::from_specs(&specs).unwrap(),
        generators: vec!["a".into(), "b".into(), "c".into(), "d".into()],
    }
}

/// Basilica recursion `a = (b, 1)σ`, `b = (a, 1)`.
pub fn basilica_group() -> AutomatonSystem {
    let specs = vec![
        spec("e", "()", ["e", "e"]),
        spec("a", "(0 1)", ["b", "e"]),
        spec("b", "()", ["a", "e"]),
    ];
    AutomatonSystem {
        name: "basilica".into(),
        automaton: Automaton::from_specs(&specs).unwrap(),
        generators: vec!["a".into(), "b".into()],
    }
}

/// The group generated by the level-`n` images of the system's generators.
#[derive(Debug, Clone)]
pub struct LevelQuotient {
    pub level: usize,
    pub group: PermGroup,
    pub generator_names: Vec<String>,
    pub generator_images: Vec<Permutation>,
}

impl AutomatonSystem {
    pub fn generator_images(&self, n: usize, max_level: usize) -> Result<Vec<Permutation>, TreeError> {
        if n == 0 || n > max_level {
            return Err(TreeError::LevelOutOfRange {
                level: n,
                max: max_level,
            });
        }
        self.generators
            .iter()
            .map(|g| Ok(self.automaton.level_permutation(self.automaton.state(g)?, n)))
            .collect()
    }
}

pub fn level_quotient_group(
    sys: &AutomatonSystem,
    n: usize,
    max_level: usize,
) -> Result<LevelQuotient, TreeError> {
    let imgs = sys.generator_images(n, max_level)?;
    Ok(LevelQuotient {
        level: n,
        group: PermGroup::new(1 << n, imgs.clone()).expect("images have degree 2^n"),
        generator_names: sys.generators.clone(),
        generator_images: imgs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub order: String,
    pub log2_order: Option<u64>,
    pub is_two_group: bool,
    pub nilpotency_class: Option<usize>,
    pub derived_length: Option<usize>,
    /// Projecting the level-`n` generator images gives the level-`(n-1)` ones.
    pub restriction_compatible: bool,
    pub restriction_onto: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoGroupTowerReport {
    pub system: String,
    pub levels: Vec<LevelReport>,
    pub all_two_groups: bool,
    pub all_nilpotent: bool,
    pub restrictions_compatible: bool,
    pub derived_lengths_monotone: bool,
}

fn log2_exact(n: &BigUint) -> Option<u64> {
    if biguint_is_power_of(n, 2) {
        Some(n.bits() - 1)
    } else {
        None
    }
}

pub fn verify_two_group_tower(
    sys: &AutomatonSystem,
    max_n: usize,
    max_level: usize,
) -> Result<TwoGroupTowerReport, TreeError> {
    let mut levels = Vec::new();
    let mut prev: Option<LevelQuotient> = None;
    for n in 1..=max_n {
        let q = level_quotient_group(sys, n, max_level)?;
        let order = q.group.order();
        let (compatible, onto) = match &prev {
            None => (true, true),
            Some(p) => {
                let projected: Vec<Permutation> = q.generator_images.iter().map(project).collect();
                let compatible = projected == p.generator_images;
                let img = PermGroup::new(p.group.degree(), projected).unwrap();
                (compatible, img.order() == p.group.order())
            }
        };
        let lcs = lower_central_series(&q.group);
        let der = derived_series(&q.group);
        levels.push(LevelReport {
            level: n,
            log2_order: log2_exact(&order),
            is_two_group: biguint_is_power_of(&order, 2),
            order: order.to_string(),
            nilpotency_class: lcs.length(),
            derived_length: der.length(),
            restriction_compatible: compatible,
            restriction_onto: onto,
        });
        prev = Some(q);
    }
    let monotone = levels
        .windows(2)
        .all(|w| match (w[0].derived_length, w[1].derived_length) {
            (Some(a), Some(b)) => a <= b,
            _ => false,
        });
    Ok(TwoGroupTowerReport {
        system: sys.name.clone(),
        all_two_groups: levels.iter().all(|l| l.is_two_group),
        all_nilpotent: levels.iter().all(|l| l.nilpotency_class.is_some()),
        restrictions_compatible: levels
            .iter()
            .all(|l| l.restriction_compatible && l.restriction_onto),
        derived_lengths_monotone: monotone,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate_permutations;
    use proptest::prelude::*;

    fn g() -> AutomatonSystem {
        grigorchuk_group(ChildOrder::Standard)
    }

    fn gen(sys: &AutomatonSystem, name: &str) -> TreeAutomorphism {
        TreeAutomorphism::of_state(&sys.automaton, name).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let id = TreeAutomorphism::identity();
        for n in 1..=5 {
            assert!(id.restrict(n, 7).unwrap().is_identity());
        }
        let s = TreeAutomorphism::root_swap().restrict(1, 7).unwrap();
        assert_eq!(s.to_string(), "(0 1)");
        assert!(gen(&g(), "b").restrict(1, 7).unwrap().is_identity());
        assert!(id.restrict(0, 7).is_err());
        assert!(id.restrict(8, 7).is_err());
    }

    #[test]
    fn grigorchuk_relations() {
        let sys = g();
        for n in 1..=6 {
            let imgs = sys.generator_images(n, 7).unwrap();
            for x in &imgs {
                assert!(x.mul(x).is_identity());
            }
            assert!(imgs[1].mul(&imgs[2]).mul(&imgs[3]).is_identity());
        }
    }

    #[test]
    fn level_orders() {
        let sys = g();
        let expect: [u64; 5] = [2, 8, 128, 1 << 12, 1 << 22];
        for (n, &e) in (1..=5).zip(&expect) {
            let q = level_quotient_group(&sys, n, 7).unwrap();
            assert_eq!(q.group.order(), BigUint::from(e), "level {n}");
            if n <= 3 {
                let raw: Vec<Vec<u32>> =
                    q.generator_images.iter().map(|p| p.images().to_vec()).collect();
                let all = enumerate_permutations(1 << n, &raw, 1 << 16).unwrap();
                assert_eq!(all.len() as u64, e);
            }
        }
        let swapped = grigorchuk_group(ChildOrder::Swapped);
        let q = level_quotient_group(&swapped, 4, 7).unwrap();
        assert_eq!(q.group.order(), BigUint::from(1u64 << 12));
    }

    #[test]
    fn two_group_tower() {
        let r = verify_two_group_tower(&g(), 5, 7).unwrap();
        assert!(r.all_two_groups && r.all_nilpotent);
        assert!(r.restrictions_compatible && r.derived_lengths_monotone);
        let logs: Vec<u64> = r.levels.iter().map(|l| l.log2_order.unwrap()).collect();
        assert_eq!(logs, vec![1, 3, 7, 12, 22]);
    }

    #[test]
    fn basilica_levels_are_two_groups() {
        // Level quotients of a subgroup of the binary tree automorphisms are 2-groups.
        let r = verify_two_group_tower(&basilica_group(), 4, 7).unwrap();
        assert!(r.all_two_groups && r.restrictions_compatible);
    }

    #[test]
    fn deep_levels() {
        let r = verify_two_group_tower(&g(), 7, 7).unwrap();
        let logs: Vec<u64> = r.levels.iter().map(|l| l.log2_order.unwrap()).collect();
        assert_eq!(logs, vec![1, 3, 7, 12, 22, 42, 82]);
        assert!(r.all_nilpotent && r.restrictions_compatible);
    }

    #[test]
    fn file_specs_are_checked() {
        let bad = vec![spec("a", "(0 2)", ["a", "a"])];
        assert!(matches!(
            Automaton::from_specs(&bad),
            Err(TreeError::BadPermutation(..))
        ));
        let bad = vec![spec("a", "()", ["a", "z"])];
        assert_eq!(
            Automaton::from_specs(&bad).unwrap_err(),
            TreeError::UnknownState("z".into())
        );
    }

    fn word_in(sys: &AutomatonSystem, picks: &[usize]) -> TreeAutomorphism {
        let mut t = TreeAutomorphism::identity();
        for &i in picks {
            t = t.then(&gen(sys, &sys.generators[i % sys.generators.len()]));
        }
        t
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn composition_commutes_with_restriction(
            u in prop::collection::vec(0usize..4, 0..8),
            v in prop::collection::vec(0usize..4, 0..8),
            n in 1usize..=6,
        ) {
            let sys = g();
            let (tu, tv) = (word_in(&sys, &u), word_in(&sys, &v));
            let lhs = tu.then(&tv).restrict(n, 7).unwrap();
            let rhs = tu.restrict(n, 7).unwrap().mul(&tv.restrict(n, 7).unwrap());
            prop_assert_eq!(lhs, rhs);
            if n > 1 {
                prop_assert_eq!(project(&tu.restrict(n, 7).unwrap()), tu.restrict(n - 1, 7).unwrap());
            }
        }
    }
}
