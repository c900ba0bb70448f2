//! Stabilizer chains by the deterministic Schreier-Sims procedure, run as an
//! explicit worklist so deep orbits do not grow the call stack.

use num_bigint::BigUint;
use num_traits::One;

use super::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `reps[j]` maps the base point to `j`.
    reps: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut reps = vec![None; degree];
        reps[base] = Some(Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            reps,
            orbit: vec![base],
        }
    }
}

enum Job {
    /// Make sure the element (fixing the first `k` base points) lies in the group at level `k`.
    Add(usize, Permutation),
    /// Record the image of the level-`k` base point under the element.
    Orbit(usize, Permutation),
}

/// Base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    /// A chain whose first base points are fixed in advance; further points are
    /// chosen as needed.
    pub fn with_base_prefix(degree: usize, prefix: &[usize]) -> Self {
        let mut c = Self::new(degree);
        for &b in prefix {
            assert!(b < degree);
            if c.levels.iter().all(|l| l.base != b) {
                c.levels.push(Level::new(b, degree));
            }
        }
        c
    }

    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        let mut c = Self::new(degree);
        for g in gens {
            c.add_generator(g);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `g` from level `k` on; returns the residue and the level where
    /// sifting stopped.
    fn sift_from(&self, k: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, l) in self.levels.iter().enumerate().skip(k) {
            let j = h.image(l.base);
            match &l.reps[j] {
                Some(r) => h = h.mul(&r.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Sift residue of `g`; the identity iff `g` is in the group.
    pub fn sift(&self, g: &Permutation) -> Permutation {
        self.sift_from(0, g).0
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g).is_identity()
    }

    /// Extends the group by `g`. Returns whether the group grew.
    pub fn add_generator(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if self.contains(g) {
            return false;
        }
        let mut jobs = vec![Job::Add(0, g.clone())];
        while let Some(job) = jobs.pop() {
            match job {
                Job::Add(k, p) => {
                    let (residue, _) = self.sift_from(k, &p);
                    if residue.is_identity() {
                        continue;
                    }
                    if k == self.levels.len() {
                        let b = p.first_moved().expect("non-identity");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    let lvl = &mut self.levels[k];
                    lvl.gens.push(p.clone());
                    for &j in &lvl.orbit {
                        let r = lvl.reps[j].as_ref().expect("orbit point has a rep");
                        jobs.push(Job::Orbit(k, r.mul(&p)));
                    }
                }
                Job::Orbit(k, p) => {
                    let lvl = &mut self.levels[k];
                    let j = p.image(lvl.base);
                    match &lvl.reps[j] {
                        None => {
                            for s in &lvl.gens {
                                jobs.push(Job::Orbit(k, p.mul(s)));
                            }
                            lvl.orbit.push(j);
                            lvl.reps[j] = Some(p);
                        }
                        Some(r) => {
                            let schreier = p.mul(&r.inverse());
                            if !schreier.is_identity() {
                                jobs.push(Job::Add(k + 1, schreier));
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Transversal element sending the level-`k` base point to `j`.
    pub fn transversal(&self, k: usize, j: usize) -> Option<&Permutation> {
        self.levels.get(k)?.reps.get(j)?.as_ref()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level_base(&self, k: usize) -> usize {
        self.levels[k].base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate_permutations;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    fn enum_order(n: usize, gens: &[Permutation]) -> usize {
        let raw: Vec<Vec<u32>> = gens.iter().map(|g| g.images().to_vec()).collect();
        enumerate_permutations(n, &raw, 1 << 20).unwrap().len()
    }

    #[test]
    fn small_orders() {
        let s4 = [p(4, "(0 1)"), p(4, "(0 1 2 3)")];
        assert_eq!(StabChain::from_generators(4, &s4).order(), BigUint::from(24u32));
        let a5 = [p(5, "(0 1 2 3 4)"), p(5, "(0 1 2)")];
        assert_eq!(StabChain::from_generators(5, &a5).order(), BigUint::from(60u32));
        assert_eq!(StabChain::new(3).order(), BigUint::one());
        let m = StabChain::from_generators(7, &[p(7, "(0 1 2 3 4 5 6)"), p(7, "(0 1)")]);
        assert_eq!(m.order(), BigUint::from(5040u32));
    }

    #[test]
    fn membership() {
        let a5 = StabChain::from_generators(5, &[p(5, "(0 1 2 3 4)"), p(5, "(0 1 2)")]);
        assert!(a5.contains(&p(5, "(0 1)(2 3)")));
        assert!(!a5.contains(&p(5, "(0 1)")));
    }

    #[test]
    fn prefix_base_is_respected() {
        let c = StabChain::with_base_prefix(5, &[4, 3]);
        let mut c = c;
        c.add_generator(&p(5, "(0 1 2 3 4)"));
        c.add_generator(&p(5, "(0 1)"));
        assert_eq!(c.base()[..2], [4, 3]);
        assert_eq!(c.order(), BigUint::from(120u32));
    }

    #[test]
    fn agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..=7);
            let k = rng.gen_range(1..=3);
            let gens: Vec<Permutation> = (0..k)
                .map(|_| {
                    let mut v: Vec<u32> = (0..n as u32).collect();
                    for i in (1..n).rev() {
                        let j = rng.gen_range(0..=i);
                        v.swap(i, j);
                    }
                    Permutation::from_images(v).unwrap()
                })
                .collect();
            let c = StabChain::from_generators(n, &gens);
            assert_eq!(c.order(), BigUint::from(enum_order(n, &gens)));
        }
    }
}
