//! Quotients of free groups along the lower central and derived series.
//!
//! * `F/C^j` through the truncated Magnus expansion ([`magnus`]),
//! * `F/D²` through abelianized Fox derivatives ([`fox`]),
//! * subgroup membership and rank through Stallings folding ([`folding`]).

pub mod folding;
pub mod fox;
pub mod magnus;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{commutator, Word};
use crate::zlattice::{abelian_invariants, exponent_matrix, IntMatrix};

pub use folding::SubgroupGraph;
pub use fox::{metabelian_image, Laurent, MetabelianImage};
pub use magnus::{magnus_image, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeQuotError {
    #[error("class {class} exceeds the configured bound {bound}")]
    ClassTooLarge { class: usize, bound: usize },
    #[error("rank {k} class {class} needs about {needed} coefficients, budget is {budget}")]
    MemoryBudget {
        k: usize,
        class: usize,
        needed: u128,
        budget: u128,
    },
}

/// Lower-central depth of a word as certified by a Magnus truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LcsDepth {
    /// `w ∈ C^j \ C^{j+1}`.
    Exact(usize),
    /// `w ∈ C^j` for the given `j = cutoff + 1`; nothing more is known.
    AtLeast(usize),
    /// `w` is the identity.
    Trivial,
}

impl fmt::Display for LcsDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDepth::Exact(j) => write!(f, "{j}"),
            LcsDepth::AtLeast(j) => write!(f, ">= {j}"),
            LcsDepth::Trivial => write!(f, "infinite (trivial word)"),
        }
    }
}

/// Largest `j` with `w ∈ C^j(F_k)`, exact when `j <= cutoff`.
pub fn lcs_depth(w: &Word, k: usize, cutoff: usize) -> LcsDepth {
    if w.reduced().is_empty() {
        return LcsDepth::Trivial;
    }
    match magnus_image(w, k, cutoff).lowest_degree() {
        Some(j) => LcsDepth::Exact(j),
        None => LcsDepth::AtLeast(cutoff + 1),
    }
}

/// Whether `⟨gens⟩ → F_k/C^{class}(F_k)` is onto.
///
/// A subgroup surjects onto every nilpotent quotient `F_k/C^j` as soon as it
/// surjects onto the abelianization `Z^k`, so only the exponent vectors are
/// examined; `class` is accepted for the caller's record.
pub fn nilpotent_surjectivity(gens: &[Word], k: usize, class: usize) -> bool {
    let _ = class;
    let m = exponent_matrix(gens, k);
    abelian_invariants(&m).is_trivial()
}

/// A basic commutator in Hall's sense.
#[derive(Debug, Clone)]
pub struct BasicCommutator {
    pub weight: usize,
    /// Indices of the two factors in the basis list, `None` for generators.
    pub factors: Option<(usize, usize)>,
    pub word: Word,
}

/// Hall basic commutators of weight `<= class` on `k` generators, ordered by
/// weight and then by construction order.
pub fn basic_commutators(k: usize, class: usize) -> Vec<BasicCommutator> {
    let mut basis: Vec<BasicCommutator> = (0..k)
        .map(|g| BasicCommutator {
            weight: 1,
            factors: None,
            word: Word::generator(g),
        })
        .collect();
    for w in 2..=class {
        let mut fresh = Vec::new();
        for i in 0..basis.len() {
            for j in 0..i {
                if basis[i].weight + basis[j].weight != w {
                    continue;
                }
                // [c_i, c_j] with c_i > c_j; if c_i = [c_s, c_t] then c_t <= c_j.
                if let Some((_, t)) = basis[i].factors {
                    if t > j {
                        continue;
                    }
                }
                fresh.push(BasicCommutator {
                    weight: w,
                    factors: Some((i, j)),
                    word: commutator(&basis[i].word, &basis[j].word),
                });
            }
        }
        basis.extend(fresh);
    }
    basis
}

/// Coefficient budget for [`lcs_layer_ranks`].
pub const DEFAULT_LAYER_BUDGET: u128 = 1 << 24;

/// Ranks of the layers `C^j(F_k)/C^{j+1}(F_k)` for `j = 1..=class`, computed as
/// the rank of the degree-`j` leading terms of the Magnus images of the basic
/// commutators of weight `j`.
pub fn lcs_layer_ranks(
    k: usize,
    class: usize,
    max_class: usize,
    budget: u128,
) -> Result<Vec<usize>, FreeQuotError> {
    if class > max_class {
        return Err(FreeQuotError::ClassTooLarge {
            class,
            bound: max_class,
        });
    }
    let basis_estimate = (k as u128).pow(class as u32) / class.max(1) as u128 + k as u128;
    let needed = basis_estimate * (k as u128).pow(class as u32);
    if needed > budget {
        return Err(FreeQuotError::MemoryBudget {
            k,
            class,
            needed,
            budget,
        });
    }
    let basis = basic_commutators(k, class);
    let mut ranks = Vec::with_capacity(class);
    for j in 1..=class {
        let rows: Vec<Vec<num_bigint::BigInt>> = basis
            .iter()
            .filter(|b| b.weight == j)
            .map(|b| magnus_image(&b.word, k, j).homogeneous(j))
            .collect();
        let width = k.pow(j as u32);
        let m = IntMatrix::from_rows(width, &rows);
        ranks.push(m.rank());
    }
    Ok(ranks)
}

/// `w ∈ ⟨gens⟩` by Stallings folding.
pub fn subgroup_membership(gens: &[Word], w: &Word) -> bool {
    SubgroupGraph::from_generators(gens).contains(w)
}

/// Free rank of `⟨gens⟩`.
pub fn subgroup_rank(gens: &[Word]) -> usize {
    SubgroupGraph::from_generators(gens).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::necklace_count;
    use crate::words::{exponent_sums, parse_word, Letter};
    use proptest::prelude::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn w(s: &str) -> Word {
        parse_word(s, &xy()).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(lcs_depth(&w("x"), 2, 4), LcsDepth::Exact(1));
        assert_eq!(lcs_depth(&w("[x,y]"), 2, 4), LcsDepth::Exact(2));
        assert_eq!(lcs_depth(&w("[[x,y],y]"), 2, 4), LcsDepth::Exact(3));
        assert_eq!(lcs_depth(&w("[[x,y],y]"), 2, 2), LcsDepth::AtLeast(3));
        assert_eq!(lcs_depth(&w("x x^-1"), 2, 4), LcsDepth::Trivial);
    }

    #[test]
    fn surjectivity_examples() {
        let yp = w("y x y x^-1 y^-1");
        assert!(nilpotent_surjectivity(&[w("x"), yp], 2, 6));
        assert!(!nilpotent_surjectivity(&[w("x^2"), w("y")], 2, 6));
        assert!(nilpotent_surjectivity(&[w("x"), w("y")], 2, 6));
    }

    #[test]
    fn layer_ranks_match_necklaces() {
        assert_eq!(lcs_layer_ranks(2, 2, 8, DEFAULT_LAYER_BUDGET).unwrap(), vec![2, 1]);
        let r = lcs_layer_ranks(2, 6, 8, DEFAULT_LAYER_BUDGET).unwrap();
        let oracle: Vec<usize> = (1..=6).map(|n| necklace_count(2, n) as usize).collect();
        assert_eq!(r, oracle);
        assert_eq!(r, vec![2, 1, 2, 3, 6, 9]);
        assert_eq!(lcs_layer_ranks(1, 3, 8, DEFAULT_LAYER_BUDGET).unwrap(), vec![1, 0, 0]);
        let r3 = lcs_layer_ranks(3, 4, 8, DEFAULT_LAYER_BUDGET).unwrap();
        let o3: Vec<usize> = (1..=4).map(|n| necklace_count(3, n) as usize).collect();
        assert_eq!(r3, o3);
    }

    #[test]
    fn layer_rank_limits() {
        assert!(matches!(
            lcs_layer_ranks(2, 9, 8, DEFAULT_LAYER_BUDGET),
            Err(FreeQuotError::ClassTooLarge { .. })
        ));
        assert!(matches!(
            lcs_layer_ranks(4, 8, 8, DEFAULT_LAYER_BUDGET),
            Err(FreeQuotError::MemoryBudget { .. })
        ));
    }

    #[test]
    fn basic_commutators_have_their_weight_as_depth() {
        for b in basic_commutators(2, 6) {
            assert_eq!(lcs_depth(&b.word, 2, 6), LcsDepth::Exact(b.weight));
        }
    }

    #[test]
    fn membership_examples() {
        let gens = vec![w("x"), w("y x y x^-1 y^-1")];
        assert!(!subgroup_membership(&gens, &w("y")));
        assert!(subgroup_membership(&gens, &w("x")));
        assert_eq!(subgroup_rank(&gens), 2);
        assert_eq!(subgroup_rank(&[w("x")]), 1);
        assert_eq!(subgroup_rank(&[w("x"), w("x^2")]), 1);
    }

    fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..k, any::<bool>()), 0..max).prop_map(|v| {
            Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn magnus_is_multiplicative(u in word(2, 12), v in word(2, 12), c in 1usize..=5) {
            let lhs = magnus_image(&u, 2, c).mul(&magnus_image(&v, 2, c));
            prop_assert_eq!(lhs, magnus_image(&u.concat(&v), 2, c));
        }

        #[test]
        fn depth_two_iff_zero_exponents(u in word(3, 16)) {
            let zero = exponent_sums(&u, 3).iter().all(|&e| e == 0);
            let deep = !matches!(lcs_depth(&u, 3, 3), LcsDepth::Exact(1));
            prop_assert_eq!(zero, deep);
        }

        #[test]
        fn fox_identity_and_product_rule(u in word(2, 16), v in word(2, 16)) {
            let mu = metabelian_image(&u, 2);
            let mv = metabelian_image(&v, 2);
            let muv = metabelian_image(&u.concat(&v), 2);
            prop_assert!(muv.fundamental_identity_holds());
            let shift = Laurent::monomial(mu.exponents.clone(), 1);
            for i in 0..2 {
                prop_assert_eq!(&muv.fox[i], &(&mu.fox[i] + &(&shift * &mv.fox[i])));
            }
            // Free reduction does not change the image.
            prop_assert_eq!(metabelian_image(&u.reduced(), 2), mu);
        }

        #[test]
        fn double_commutators_are_metabelian_trivial(
            a in word(2, 6), b in word(2, 6), c in word(2, 6), d in word(2, 6)
        ) {
            let w = commutator(&commutator(&a, &b), &commutator(&c, &d));
            prop_assert!(metabelian_image(&w, 2).is_trivial());
        }

        #[test]
        fn products_of_generators_are_members(
            picks in prop::collection::vec((0usize..3, any::<bool>()), 0..10)
        ) {
            let gens = vec![w("x^2 y"), w("y x y x^-1 y^-1"), w("[x,y]")];
            let mut g = Word::identity();
            for (i, inv) in picks {
                g = g.mul(&if inv { gens[i].inverse() } else { gens[i].clone() });
            }
            prop_assert!(subgroup_membership(&gens, &g));
        }
    }
}
