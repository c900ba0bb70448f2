use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::chain::StabChain;
use super::perm::Permutation;
use super::FiniteError;

/// A permutation group given by generators. The stabilizer chain is built on
/// first use and then shared read-only.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain,
        }
    }
}

impl PermGroup {
    /// Identity generators are dropped.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self, FiniteError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(FiniteError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        })
    }

    fn with_chain(degree: usize, gens: Vec<Permutation>, chain: StabChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup {
            degree,
            gens,
            chain: cell,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::with_chain(degree, Vec::new(), StabChain::new(degree))
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        if n >= 3 {
            gens.push(Permutation::from_cycles(n, &[(0..n).collect()]).unwrap());
        }
        Self::new(n, gens).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (2..n)
            .map(|i| Permutation::from_cycles(n, &[vec![0, 1, i]]).unwrap())
            .collect();
        Self::new(n, gens).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let g = if n >= 2 {
            vec![Permutation::from_cycles(n, &[(0..n).collect()]).unwrap()]
        } else {
            Vec::new()
        };
        Self::new(n.max(1), g).unwrap()
    }

    /// Symmetries of a regular `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rot = Permutation::from_cycles(n, &[(0..n).collect()]).unwrap();
        let refl: Vec<u32> = (0..n).map(|i| ((n - i) % n) as u32).collect();
        Self::new(n, vec![rot, Permutation::from_images(refl).unwrap()]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.gens))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as a machine integer when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Same set of elements.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && self.order() == other.order()
    }

    /// `self` is normalized by every generator of `g`.
    pub fn is_normal_in(&self, g: &PermGroup) -> bool {
        self.is_subgroup_of(g)
            && self
                .gens
                .iter()
                .all(|n| g.gens.iter().all(|x| self.contains(&n.conjugate_by(x))))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[..i].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Subgroup generated by `gens`, sharing this group's degree.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup, FiniteError> {
        PermGroup::new(self.degree, gens)
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> PermGroup {
        let mut chain = StabChain::new(self.degree);
        let mut gens: Vec<Permutation> = Vec::new();
        let mut queue: Vec<Permutation> = Vec::new();
        for s in seeds {
            if chain.add_generator(s) {
                gens.push(s.clone());
                queue.push(s.clone());
            }
        }
        while let Some(n) = queue.pop() {
            for x in &self.gens {
                let c = n.conjugate_by(x);
                if chain.add_generator(&c) {
                    gens.push(c.clone());
                    queue.push(c);
                }
            }
        }
        PermGroup::with_chain(self.degree, gens, chain)
    }

    /// `[A, B]` for subgroups `A`, `B` of `self` with `A` or `B` normal in
    /// `self`, computed as the normal closure in `self` of the commutators of
    /// generators. `A = B = self` gives the derived subgroup.
    pub fn commutator_subgroup(&self, a: &PermGroup, b: &PermGroup) -> PermGroup {
        let mut seeds = Vec::new();
        for x in &a.gens {
            for y in &b.gens {
                let c = x.commutator(y);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        self.commutator_subgroup(self, self)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    /// All elements, if there are at most `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>, FiniteError> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(FiniteError::CapExceeded {
                what: "element enumeration",
                cap: cap as u128,
            });
        }
        let mut out = vec![self.identity()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(self.identity());
        let mut i = 0;
        while i < out.len() {
            for g in &self.gens {
                let y = out[i].mul(g);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Disjoint-union action of `self × other` on `deg(self) + deg(other)` points.
    pub fn direct_product(&self, other: &PermGroup) -> PermGroup {
        let idb = other.identity();
        let ida = self.identity();
        let mut gens: Vec<Permutation> = self.gens.iter().map(|g| g.direct_sum(&idb)).collect();
        gens.extend(other.gens.iter().map(|g| ida.direct_sum(g)));
        PermGroup::new(self.degree + other.degree, gens).unwrap()
    }

    /// Right action on the right cosets of a normal subgroup `n`, which is a
    /// faithful permutation representation of `self / n`. Returns the quotient
    /// with the images of this group's generators, in order.
    pub fn quotient_by_normal(
        &self,
        n: &PermGroup,
        max_index: usize,
    ) -> Result<(PermGroup, Vec<Permutation>), FiniteError> {
        if !n.is_normal_in(self) {
            return Err(FiniteError::NotNormal);
        }
        let index = self.order() / n.order();
        if index > BigUint::from(max_index) {
            return Err(FiniteError::CapExceeded {
                what: "quotient index",
                cap: max_index as u128,
            });
        }
        let index = index.to_usize().unwrap();
        // Coset representatives, discovered breadth-first.
        let mut reps = vec![self.identity()];
        let find = |reps: &[Permutation], x: &Permutation| -> Option<usize> {
            reps.iter()
                .position(|r| n.contains(&x.mul(&r.inverse())))
        };
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); self.gens.len()];
        let mut i = 0;
        while i < reps.len() {
            for (gi, g) in self.gens.iter().enumerate() {
                let y = reps[i].mul(g);
                let j = match find(&reps, &y) {
                    Some(j) => j,
                    None => {
                        reps.push(y);
                        reps.len() - 1
                    }
                };
                images[gi].push(j as u32);
            }
            i += 1;
        }
        debug_assert_eq!(reps.len(), index);
        let imgs: Vec<Permutation> = images
            .into_iter()
            .map(|v| Permutation::from_images(v).expect("coset action is a bijection"))
            .collect();
        let q = PermGroup::new(index, imgs.clone())?;
        Ok((q, imgs))
    }
}

/// Imprimitive wreath product `s ≀ t`: `t` permutes `m = deg(t)` blocks, each a
/// copy of the points of `s`. Fails when `|s|^m |t|` exceeds `max_order`.
pub fn wreath_product(
    s: &PermGroup,
    t: &PermGroup,
    max_order: &BigUint,
) -> Result<PermGroup, FiniteError> {
    let m = t.degree();
    let k = s.degree();
    let order = s.order().pow(m as u32) * t.order();
    if &order > max_order {
        return Err(FiniteError::CapExceeded {
            what: "wreath product order",
            cap: max_order.to_u128().unwrap_or(u128::MAX),
        });
    }
    let n = k * m;
    let mut gens = Vec::new();
    for b in 0..m {
        for g in s.generators() {
            let mut img: Vec<u32> = (0..n as u32).collect();
            for i in 0..k {
                img[b * k + i] = (b * k + g.image(i)) as u32;
            }
            gens.push(Permutation::from_images_unchecked(img));
        }
    }
    for g in t.generators() {
        let mut img = vec![0u32; n];
        for b in 0..m {
            for i in 0..k {
                img[b * k + i] = (g.image(b) * k + i) as u32;
            }
        }
        gens.push(Permutation::from_images_unchecked(img));
    }
    PermGroup::new(n, gens)
}

/// A homomorphism between permutation groups given on generators, represented
/// by its graph `⟨(g_i, h_i)⟩ ≤ G × H`.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: PermGroup,
    target: PermGroup,
    images: Vec<Permutation>,
    graph: StabChain,
    /// Some identity element was assigned a non-identity image.
    identity_clash: bool,
}

impl Homomorphism {
    /// `images[i]` is the image of `source.generators()[i]`.
    pub fn new(
        source: &PermGroup,
        target: &PermGroup,
        images: Vec<Permutation>,
    ) -> Result<Self, FiniteError> {
        if images.len() != source.generators().len() {
            return Err(FiniteError::ArityMismatch {
                expected: source.generators().len(),
                found: images.len(),
            });
        }
        let pairs: Vec<(Permutation, Permutation)> =
            source.generators().iter().cloned().zip(images).collect();
        Self::from_pairs(source, target, &pairs)
    }

    /// Assignment `x_i ↦ y_i` where the `x_i` generate `source`.
    pub fn from_pairs(
        source: &PermGroup,
        target: &PermGroup,
        pairs: &[(Permutation, Permutation)],
    ) -> Result<Self, FiniteError> {
        for (x, y) in pairs {
            if x.degree() != source.degree() {
                return Err(FiniteError::DegreeMismatch {
                    expected: source.degree(),
                    found: x.degree(),
                });
            }
            if y.degree() != target.degree() {
                return Err(FiniteError::DegreeMismatch {
                    expected: target.degree(),
                    found: y.degree(),
                });
            }
        }
        // Base points of the source first, so sifting the source part of a pair
        // leaves a pure target element.
        let prefix = source.chain().base();
        let mut graph = StabChain::with_base_prefix(source.degree() + target.degree(), &prefix);
        let mut identity_clash = false;
        for (x, y) in pairs {
            if x.is_identity() && !y.is_identity() {
                identity_clash = true;
            }
            graph.add_generator(&x.direct_sum(y));
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            images: pairs.iter().map(|(_, y)| y.clone()).collect(),
            graph,
            identity_clash,
        })
    }

    /// The assignment extends to a homomorphism on the source: the graph
    /// projects isomorphically onto it.
    pub fn is_well_defined(&self) -> bool {
        !self.identity_clash && self.graph.order() == self.source.order()
    }

    /// Images lie in the target and generate it.
    pub fn is_surjective(&self) -> bool {
        let img = PermGroup::new(self.target.degree(), self.images.clone()).unwrap();
        img.is_subgroup_of(&self.target) && img.order() == self.target.order()
    }

    /// Image of `x`, for a well-defined homomorphism and `x` in the source.
    pub fn apply(&self, x: &Permutation) -> Option<Permutation> {
        let nd = self.source.degree();
        let mut h = x.direct_sum(&Permutation::identity(self.target.degree()));
        let prefix = self.source.chain().depth();
        for k in 0..prefix.min(self.graph.depth()) {
            let j = h.image(self.graph.level_base(k));
            let r = self.graph.transversal(k, j)?;
            h = h.mul(&r.inverse());
        }
        if h.images()[..nd].iter().enumerate().any(|(i, &v)| i as u32 != v) {
            return None;
        }
        let tail: Vec<u32> = h.images()[nd..].iter().map(|&v| v - nd as u32).collect();
        Some(Permutation::from_images_unchecked(tail).inverse())
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn kernel_order(&self) -> BigUint {
        let img = PermGroup::new(self.target.degree(), self.images.clone()).unwrap();
        self.source.order() / img.order()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.same_group(other)
    }
}

pub(crate) fn biguint_is_power_of(n: &BigUint, p: u64) -> bool {
    let mut n = n.clone();
    let p = BigUint::from(p);
    while n > BigUint::one() {
        if &n % &p != BigUint::from(0u32) {
            return false;
        }
        n /= &p;
    }
    true
}
