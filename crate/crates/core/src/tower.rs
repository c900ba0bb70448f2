//! Towers of finite quotients `Γ/N_1 ← Γ/N_2 ← …` of a group given on named
//! generators, the dyadic ultrametric they define, coherent sequences, and
//! refinement between towers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::finite::{FiniteError, Homomorphism, PermGroup, Permutation};
use crate::words::{Presentation, Word};
use crate::zlattice::abelianize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("stage {stage}: expected {expected} generator images, found {found}")]
    Arity {
        stage: usize,
        expected: usize,
        found: usize,
    },
    #[error("stage {stage}: images have mixed degrees")]
    Degree { stage: usize },
    #[error("connecting map from stage {from} to stage {to} is not a homomorphism")]
    NotHomomorphism { from: usize, to: usize },
    #[error("towers have different generators")]
    IncompatibleTowers,
    #[error("sequence is not coherent at stage {0}")]
    NotCoherent(usize),
    #[error("letter for generator {0} outside the tower alphabet")]
    Alphabet(usize),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error(transparent)]
    Finite(#[from] FiniteError),
}

/// One finite quotient `Q_i`, generated by the images of the source generators.
#[derive(Debug, Clone)]
pub struct Stage {
    pub label: String,
    pub group: PermGroup,
    pub images: Vec<Permutation>,
}

/// A validated tower: every connecting map `Q_{i+1} → Q_i`, sending the image
/// of each source generator to its image one stage down, is a homomorphism.
/// Compatibility `π_i ∘ e_{i+1} = e_i` and surjectivity then hold by
/// construction.
#[derive(Debug, Clone)]
pub struct QuotientTower {
    pub name: String,
    pub generators: Vec<String>,
    stages: Vec<Stage>,
    connecting: Vec<Homomorphism>,
}

impl QuotientTower {
    /// `stages[i] = (label, degree, images of the generators)`, coarsest first.
    pub fn new(
        name: &str,
        generators: Vec<String>,
        stages: Vec<(String, usize, Vec<Permutation>)>,
    ) -> Result<Self, TowerError> {
        let k = generators.len();
        let mut built = Vec::with_capacity(stages.len());
        for (i, (label, degree, images)) in stages.into_iter().enumerate() {
            if images.len() != k {
                return Err(TowerError::Arity {
                    stage: i + 1,
                    expected: k,
                    found: images.len(),
                });
            }
            if images.iter().any(|p| p.degree() != degree) {
                return Err(TowerError::Degree { stage: i + 1 });
            }
            let group = PermGroup::new(degree, images.clone())?;
            built.push(Stage {
                label,
                group,
                images,
            });
        }
        let mut connecting = Vec::new();
        for i in 1..built.len() {
            let (lo, hi) = (&built[i - 1], &built[i]);
            let pairs: Vec<(Permutation, Permutation)> = hi
                .images
                .iter()
                .cloned()
                .zip(lo.images.iter().cloned())
                .collect();
            let h = Homomorphism::from_pairs(&hi.group, &lo.group, &pairs)?;
            if !h.is_well_defined() {
                return Err(TowerError::NotHomomorphism { from: i + 1, to: i });
            }
            connecting.push(h);
        }
        Ok(QuotientTower {
            name: name.to_string(),
            generators,
            stages: built,
            connecting,
        })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stage_orders(&self) -> Vec<BigUint> {
        self.stages.iter().map(|s| s.group.order()).collect()
    }

    /// `e_i(w)`, stages numbered from 0 here.
    pub fn evaluate(&self, stage: usize, w: &Word) -> Result<Permutation, TowerError> {
        let st = &self.stages[stage];
        let mut acc = st.group.identity();
        for l in w.letters() {
            let g = l.generator();
            let img = st.images.get(g).ok_or(TowerError::Alphabet(g))?;
            acc = if l.is_inverse() {
                acc.mul(&img.inverse())
            } else {
                acc.mul(img)
            };
        }
        Ok(acc)
    }

    /// `π_i`: stage `i + 1` to stage `i` (0-based).
    pub fn connecting(&self, i: usize) -> &Homomorphism {
        &self.connecting[i]
    }
}

/// `d(x, y)` on a tower: either `2^{-exponent}` exactly, or no stage
/// separates the two words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicDistance {
    Exact { exponent: u32 },
    ZeroUpTo(usize),
}

impl DyadicDistance {
    pub fn denominator(&self) -> Option<BigUint> {
        match self {
            DyadicDistance::Exact { exponent } => Some(BigUint::one() << *exponent),
            DyadicDistance::ZeroUpTo(_) => None,
        }
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        use DyadicDistance::*;
        match (self, other) {
            (ZeroUpTo(_), ZeroUpTo(_)) => Ordering::Equal,
            (ZeroUpTo(_), Exact { .. }) => Ordering::Less,
            (Exact { .. }, ZeroUpTo(_)) => Ordering::Greater,
            // Larger exponent, smaller distance.
            (Exact { exponent: a }, Exact { exponent: b }) => b.cmp(a),
        }
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicDistance::Exact { exponent: 0 } => write!(f, "1"),
            DyadicDistance::Exact { exponent } => {
                write!(f, "1/{}", BigUint::one() << *exponent)
            }
            DyadicDistance::ZeroUpTo(k) => write!(f, "0 up to stage {k}"),
        }
    }
}

impl Serialize for DyadicDistance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Distance from the first separating stage of a sequence of identity flags
/// (`true` = identity at that stage).
fn distance_from_flags(flags: &[bool]) -> DyadicDistance {
    match flags.iter().position(|&id| !id) {
        Some(i) => {
            // Nested stages: once separated, separated for good.
            assert!(
                flags[i..].iter().all(|&id| !id),
                "separation is not monotone along the tower"
            );
            DyadicDistance::Exact { exponent: i as u32 }
        }
        None => DyadicDistance::ZeroUpTo(flags.len()),
    }
}

/// `d(x, y) = Σ_i 2^{-i} v_i(x^{-1} y)` with `v_i = 0` exactly when stage `i`
/// does not separate; monotonicity collapses the sum to `2^{1 - i_0}`.
pub fn metric(t: &QuotientTower, x: &Word, y: &Word) -> Result<DyadicDistance, TowerError> {
    let gamma = x.inverse().concat(y);
    let flags = (0..t.depth())
        .map(|i| Ok(t.evaluate(i, &gamma)?.is_identity()))
        .collect::<Result<Vec<bool>, TowerError>>()?;
    Ok(distance_from_flags(&flags))
}

/// Distance between two coherent sequences of the same tower.
pub fn sequence_distance(a: &CoherentSequence, b: &CoherentSequence) -> DyadicDistance {
    let flags: Vec<bool> = a
        .elements
        .iter()
        .zip(&b.elements)
        .map(|(x, y)| x == y)
        .collect();
    distance_from_flags(&flags)
}

/// Truncated element of the inverse limit: one element per stage, compatible
/// under the connecting maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentSequence {
    pub elements: Vec<Permutation>,
}

impl CoherentSequence {
    /// Checks membership and compatibility.
    pub fn new(t: &QuotientTower, elements: Vec<Permutation>) -> Result<Self, TowerError> {
        if elements.len() != t.depth() {
            return Err(TowerError::IncompatibleTowers);
        }
        for (i, (e, st)) in elements.iter().zip(t.stages()).enumerate() {
            if e.degree() != st.group.degree() || !st.group.contains(e) {
                return Err(TowerError::NotCoherent(i + 1));
            }
        }
        for i in 1..elements.len() {
            let down = t.connecting(i - 1).apply(&elements[i]);
            if down.as_ref() != Some(&elements[i - 1]) {
                return Err(TowerError::NotCoherent(i));
            }
        }
        Ok(CoherentSequence { elements })
    }

    pub fn is_identity(&self) -> bool {
        self.elements.iter().all(Permutation::is_identity)
    }

    pub fn inverse(&self) -> Self {
        CoherentSequence {
            elements: self.elements.iter().map(Permutation::inverse).collect(),
        }
    }
}

/// `(e_1(w), …, e_k(w))`.
pub fn canonical_map(t: &QuotientTower, w: &Word) -> Result<CoherentSequence, TowerError> {
    let elements = (0..t.depth())
        .map(|i| t.evaluate(i, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoherentSequence { elements })
}

/// Componentwise product.
pub fn coherent_product(
    a: &CoherentSequence,
    b: &CoherentSequence,
) -> Result<CoherentSequence, TowerError> {
    if a.elements.len() != b.elements.len()
        || a.elements
            .iter()
            .zip(&b.elements)
            .any(|(x, y)| x.degree() != y.degree())
    {
        return Err(TowerError::IncompatibleTowers);
    }
    Ok(CoherentSequence {
        elements: a.elements.iter().zip(&b.elements).map(|(x, y)| x.mul(y)).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UltrametricReport {
    pub sample_size: usize,
    pub triples_checked: usize,
    pub strong_triangle: bool,
    pub symmetric: bool,
    pub left_invariant: bool,
}

impl UltrametricReport {
    pub fn passed(&self) -> bool {
        self.strong_triangle && self.symmetric && self.left_invariant
    }
}

/// Strong triangle inequality over all triples, symmetry over all pairs, and
/// left invariance under translation by each generator and each sample word.
pub fn ultrametric_check(t: &QuotientTower, sample: &[Word]) -> Result<UltrametricReport, TowerError> {
    let images: Vec<CoherentSequence> = sample
        .iter()
        .map(|w| canonical_map(t, w))
        .collect::<Result<_, _>>()?;
    let n = images.len();
    let mut dist = vec![DyadicDistance::ZeroUpTo(t.depth()); n * n];
    let mut symmetric = true;
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = metric(t, &sample[i], &sample[j])?;
            // Cross-check against the precomputed stage images.
            debug_assert_eq!(dist[i * n + j], sequence_distance(&images[i], &images[j]));
        }
    }
    for i in 0..n {
        for j in 0..i {
            symmetric &= dist[i * n + j] == dist[j * n + i];
        }
    }
    let mut strong = true;
    let mut triples = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                triples += 1;
                let xz = dist[i * n + k];
                strong &= xz <= dist[i * n + j].max(dist[j * n + k]);
            }
        }
    }
    let mut translators: Vec<Word> = (0..t.generators.len()).map(Word::generator).collect();
    translators.extend(sample.iter().take(8).cloned());
    let mut invariant = true;
    for g in &translators {
        for i in 0..n {
            for j in 0..i {
                let d = metric(t, &g.concat(&sample[i]), &g.concat(&sample[j]))?;
                invariant &= d == dist[i * n + j];
            }
        }
    }
    Ok(UltrametricReport {
        sample_size: n,
        triples_checked: triples,
        strong_triangle: strong,
        symmetric,
        left_invariant: invariant,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    /// For each coarse stage, a fine stage it factors through (1-based).
    pub coarse_through_fine: Vec<Option<usize>>,
    pub fine_through_coarse: Vec<Option<usize>>,
    pub coarse_refined_by_fine: bool,
    pub fine_refined_by_coarse: bool,
    pub same_topology: bool,
}

/// Stage `c` of `coarse` factors through stage `f` of `fine` when the map
/// sending fine generator images to coarse ones is a homomorphism.
fn factors_through(coarse: &Stage, fine: &Stage) -> Result<bool, TowerError> {
    let pairs: Vec<(Permutation, Permutation)> = fine
        .images
        .iter()
        .cloned()
        .zip(coarse.images.iter().cloned())
        .collect();
    Ok(Homomorphism::from_pairs(&fine.group, &coarse.group, &pairs)?.is_well_defined())
}

fn witnesses(coarse: &QuotientTower, fine: &QuotientTower) -> Result<Vec<Option<usize>>, TowerError> {
    coarse
        .stages()
        .iter()
        .map(|c| {
            for (j, f) in fine.stages().iter().enumerate() {
                if factors_through(c, f)? {
                    return Ok(Some(j + 1));
                }
            }
            Ok(None)
        })
        .collect()
}

pub fn refinement_check(
    coarse: &QuotientTower,
    fine: &QuotientTower,
) -> Result<RefinementReport, TowerError> {
    if coarse.generators != fine.generators {
        return Err(TowerError::IncompatibleTowers);
    }
    let ctf = witnesses(coarse, fine)?;
    let ftc = witnesses(fine, coarse)?;
    let a = ctf.iter().all(Option::is_some);
    let b = ftc.iter().all(Option::is_some);
    Ok(RefinementReport {
        coarse_through_fine: ctf,
        fine_through_coarse: ftc,
        coarse_refined_by_fine: a,
        fine_refined_by_coarse: b,
        same_topology: a && b,
    })
}

/// Disjoint cycles of the given lengths, one generator per factor: a faithful
/// model of `Z/m_1 × … × Z/m_r`. Returns the degree and the factor generators.
fn cyclic_product(moduli: &[u64]) -> (usize, Vec<Permutation>) {
    let degree: usize = moduli.iter().map(|&m| m as usize).sum::<usize>().max(1);
    let mut gens = Vec::new();
    let mut off = 0usize;
    for &m in moduli {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for i in 0..m as usize {
            img[off + i] = (off + (i + 1) % m as usize) as u32;
        }
        gens.push(Permutation::from_images(img).unwrap());
        off += m as usize;
    }
    (degree, gens)
}

/// Tower `Γ → Γ_ab ⊗ Z/p^a`, `a = 1..=max_a`, built from the abelianization:
/// a torsion factor `Z/d` contributes `Z/gcd(d, p^a)`, a free factor `Z/p^a`.
pub fn abelian_p_tower(pres: &Presentation, p: u64, max_a: u32) -> Result<QuotientTower, TowerError> {
    let ab = abelianize(pres);
    let inv = &ab.invariants;
    let mut stages = Vec::new();
    for a in 1..=max_a {
        let pa = BigUint::from(p).pow(a);
        let mut moduli: Vec<u64> = inv
            .torsion
            .iter()
            .map(|d| {
                d.magnitude()
                    .gcd(&pa)
                    .to_u64()
                    .expect("stage modulus fits in u64")
            })
            .collect();
        moduli.extend(std::iter::repeat(pa.to_u64().expect("p^a fits in u64")).take(inv.free_rank));
        let keep: Vec<usize> = (0..moduli.len()).filter(|&i| moduli[i] > 1).collect();
        let kept: Vec<u64> = keep.iter().map(|&i| moduli[i]).collect();
        let (degree, factors) = cyclic_product(&kept);
        let images = ab
            .images
            .iter()
            .map(|coords| {
                let mut acc = Permutation::identity(degree);
                for (slot, &i) in keep.iter().enumerate() {
                    let m = BigUint::from(moduli[i]);
                    let c = coords[i].mod_floor(&num_bigint::BigInt::from(m.clone()));
                    let e = c.to_i64().unwrap();
                    acc = acc.mul(&factors[slot].pow(e));
                }
                acc
            })
            .collect();
        stages.push((format!("mod {p}^{a}"), degree, images));
    }
    QuotientTower::new(&format!("{p}-adic"), pres.names(), stages)
}

/// The tower `Z/m_1 ← Z/m_2 ← …` of the infinite cyclic group on generator `t`.
pub fn cyclic_tower(name: &str, moduli: &[u64]) -> Result<QuotientTower, TowerError> {
    let stages = moduli
        .iter()
        .map(|&m| {
            let (degree, g) = cyclic_product(&[m]);
            let img = if m > 1 { g[0].clone() } else { Permutation::identity(degree) };
            (format!("Z/{m}"), degree, vec![img])
        })
        .collect();
    QuotientTower::new(name, vec!["t".into()], stages)
}

/// `t^k` as a word.
pub fn power_word(k: i64) -> Word {
    Word::from_powers(&[(0, k)])
}

#[derive(Debug, Clone, Serialize)]
pub struct GrothendieckStage {
    pub a: u32,
    pub modulus: String,
    pub inverse: String,
    pub bijective: bool,
    /// Whether bijectivity was also confirmed by exhausting `Z/p^a`.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrothendieckReport {
    pub p: u64,
    pub n: u64,
    pub stages: Vec<GrothendieckStage>,
    pub all_bijective: bool,
}

/// Largest modulus checked element by element.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Multiplication by `n` on each `Z/p^a`, `a = 1..=max_a`: the inclusion
/// `Z → (1/n)Z` becomes an isomorphism at every stage.
pub fn padic_grothendieck_demo(p: u64, n: u64, max_a: u32) -> Result<GrothendieckReport, TowerError> {
    if n.gcd(&p) != 1 {
        return Err(TowerError::NotCoprime(n, p));
    }
    let mut stages = Vec::new();
    for a in 1..=max_a {
        let m = p.checked_pow(a).expect("p^a fits in u64");
        let inv = mod_inverse(n % m, m).expect("coprime residues are invertible");
        let mut bijective = (n as u128 % m as u128) * inv as u128 % m as u128 == 1 % m as u128;
        let exhaustive = m <= EXHAUSTIVE_LIMIT;
        if exhaustive {
            let mut hit = vec![false; m as usize];
            for x in 0..m {
                hit[((x as u128 * n as u128) % m as u128) as usize] = true;
            }
            bijective &= hit.iter().all(|&h| h);
        }
        stages.push(GrothendieckStage {
            a,
            modulus: m.to_string(),
            inverse: inv.to_string(),
            bijective,
            exhaustive,
        });
    }
    Ok(GrothendieckReport {
        p,
        n,
        all_bijective: stages.iter().all(|s| s.bijective),
        stages,
    })
}

fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = num_bigint::BigInt::from(x).extended_gcd(&num_bigint::BigInt::from(m));
    if !e.gcd.is_one() {
        return None;
    }
    e.x.mod_floor(&num_bigint::BigInt::from(m)).to_u64()
}

/// `x mod p^a` for the `p`-adic integer `x = Σ_k p^{k²}`, whose digit sequence
/// is not eventually periodic, so `x` is irrational.
pub fn square_digit_padic(p: u64, a: u32) -> u64 {
    let m = p.pow(a);
    let mut x = 0;
    let mut k = 0u32;
    while k * k < a {
        x += p.pow(k * k);
        k += 1;
    }
    x % m.max(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank2Stage {
    pub a: u32,
    pub x_a: u64,
    pub kernel_size: String,
    pub expected: String,
    /// Counted by enumerating `(Z/p^a)^2` rather than by the parameterization.
    pub counted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank2Report {
    pub p: u64,
    pub stages: Vec<Rank2Stage>,
    pub kernels_nontrivial: bool,
}

/// Largest `p^{2a}` counted pair by pair.
const COUNT_LIMIT: u64 = 1 << 20;

/// For each stage `a` the map `(Z/p^a)^2 → Z/p^a`, `(u, v) ↦ u + x_a v`, has a
/// kernel of size `p^a`, so it is never injective on a nontrivial stage.
pub fn padic_rank2_demo(p: u64, x: &[u64], max_a: u32) -> Rank2Report {
    let mut stages = Vec::new();
    for a in 0..=max_a {
        let m = p.pow(a);
        let xa = x.get(a as usize).copied().unwrap_or(0) % m.max(1);
        let counted = m.saturating_mul(m) <= COUNT_LIMIT;
        let size = if counted {
            let mut c: u64 = 0;
            for u in 0..m {
                for v in 0..m {
                    if (u as u128 + xa as u128 * v as u128) % m as u128 == 0 {
                        c += 1;
                    }
                }
            }
            c
        } else {
            // Kernel is {(-x_a v, v)}: one element per v.
            m
        };
        stages.push(Rank2Stage {
            a,
            x_a: xa,
            kernel_size: size.to_string(),
            expected: m.to_string(),
            counted,
        });
    }
    Rank2Report {
        p,
        kernels_nontrivial: stages.iter().filter(|s| s.a > 0).all(|s| s.kernel_size != "1"),
        stages,
    }
}

/// Exact value of `Σ_{i ≤ k} 2^{-i} v_i` plus the tail `2^{-k}` when `v_k = 1`,
/// as a reduced fraction; the naive evaluation used to cross-check [`metric`].
pub fn weighted_sum(flags: &[bool]) -> Option<(BigUint, BigUint)> {
    let k = flags.len() as u32;
    if flags.iter().all(|&id| id) {
        return None;
    }
    let den = BigUint::one() << k;
    let mut num = BigUint::zero();
    for (i, &id) in flags.iter().enumerate() {
        if !id {
            num += BigUint::one() << (k - 1 - i as u32);
        }
    }
    if !flags[flags.len() - 1] {
        num += BigUint::one();
    }
    let g = num.gcd(&den);
    Some((num / &g, den / g))
}

pub use comparison::{completion_comparison, ComparisonReport, ComparisonSubject, PTowerSummary};

mod comparison;
