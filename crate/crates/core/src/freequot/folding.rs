//! Stallings folding for finitely generated subgroups of free groups.

use std::collections::BTreeMap;

use crate::words::{Letter, Word};

/// Folded core graph of a subgroup `⟨gens⟩ ≤ F`. Vertex 0 is the base.
///
/// Each vertex has at most one outgoing edge per signed letter; an edge
/// `u --x--> v` is stored as the two half-edges `u --x--> v` and `v --x^-1--> u`.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    out: Vec<BTreeMap<Letter, usize>>,
}

enum Job {
    Edge(usize, Letter, usize),
    Merge(usize, usize),
}

struct Folder {
    parent: Vec<usize>,
    out: Vec<BTreeMap<Letter, usize>>,
    jobs: Vec<Job>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            out: vec![BTreeMap::new()],
            jobs: Vec::new(),
        }
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.out.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.jobs.push(Job::Edge(u, l, v));
        self.jobs.push(Job::Edge(v, l.inverse(), u));
        self.drain();
    }

    fn drain(&mut self) {
        while let Some(job) = self.jobs.pop() {
            match job {
                Job::Edge(u, l, v) => {
                    let u = self.find(u);
                    let v = self.find(v);
                    match self.out[u].get(&l).copied() {
                        Some(w) => {
                            let w = self.find(w);
                            if w != v {
                                self.jobs.push(Job::Merge(w, v));
                            }
                        }
                        None => {
                            self.out[u].insert(l, v);
                        }
                    }
                }
                Job::Merge(a, b) => {
                    let a = self.find(a);
                    let b = self.find(b);
                    if a == b {
                        continue;
                    }
                    // Keep the base as a root.
                    let (keep, gone) = if b == 0 { (b, a) } else { (a, b) };
                    self.parent[gone] = keep;
                    let moved = std::mem::take(&mut self.out[gone]);
                    for (l, t) in moved {
                        self.jobs.push(Job::Edge(keep, l, t));
                    }
                }
            }
        }
    }
}

impl SubgroupGraph {
    /// Folds the wedge of loops spelled by the (reduced) generators.
    pub fn from_generators(gens: &[Word]) -> Self {
        let mut f = Folder::new();
        for g in gens {
            let g = g.reduced();
            if g.is_empty() {
                continue;
            }
            let mut cur = 0;
            let n = g.len();
            for (i, &l) in g.letters().iter().enumerate() {
                let next = if i + 1 == n { 0 } else { f.vertex() };
                f.add_edge(cur, l, next);
                cur = next;
            }
        }
        // Renumber roots, base first.
        let n = f.parent.len();
        let mut roots: Vec<usize> = (0..n).filter(|&v| f.find(v) == v).collect();
        roots.sort_unstable();
        let mut index = vec![usize::MAX; n];
        for (i, &r) in roots.iter().enumerate() {
            index[r] = i;
        }
        let mut out = vec![BTreeMap::new(); roots.len()];
        for &r in &roots {
            let edges: Vec<(Letter, usize)> = f.out[r].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in edges {
                let t = f.find(t);
                out[index[r]].insert(l, index[t]);
            }
        }
        let mut g = SubgroupGraph { out };
        g.prune();
        g
    }

    /// Removes hanging trees: non-base vertices of degree one, repeatedly.
    fn prune(&mut self) {
        let n = self.out.len();
        let mut alive = vec![true; n];
        let mut stack: Vec<usize> = (1..n).filter(|&v| self.out[v].len() <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || v == 0 || self.out[v].len() > 1 {
                continue;
            }
            alive[v] = false;
            let edges: Vec<(Letter, usize)> = self.out[v].iter().map(|(&l, &t)| (l, t)).collect();
            self.out[v].clear();
            for (l, t) in edges {
                self.out[t].remove(&l.inverse());
                if t != 0 && self.out[t].len() <= 1 {
                    stack.push(t);
                }
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if alive[v] {
                index[v] = next;
                next += 1;
            }
        }
        let out = (0..n)
            .filter(|&v| alive[v])
            .map(|v| {
                self.out[v]
                    .iter()
                    .map(|(&l, &t)| (l, index[t]))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        self.out = out;
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out
            .iter()
            .map(|m| m.keys().filter(|l| !l.is_inverse()).count())
            .sum()
    }

    /// Free rank of the subgroup: `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Traces the reduced form of `w` from the base.
    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0;
        for l in w.reduced().letters() {
            match self.out[v].get(l) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    /// No vertex has two outgoing half-edges with one label (by construction),
    /// and every half-edge has its reverse.
    pub fn is_folded(&self) -> bool {
        self.out.iter().enumerate().all(|(u, m)| {
            m.iter()
                .all(|(l, &t)| self.out[t].get(&l.inverse()) == Some(&u))
        })
    }

    /// Edges as `(from, generator, to)` with positive labels.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for (u, m) in self.out.iter().enumerate() {
            for (l, &t) in m {
                if !l.is_inverse() {
                    e.push((u, l.generator(), t));
                }
            }
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn w(s: &str) -> Word {
        parse_word(s, &xy()).unwrap()
    }

    #[test]
    fn stallings_example() {
        let gens = vec![w("x"), w("y x y x^-1 y^-1")];
        let g = SubgroupGraph::from_generators(&gens);
        assert!(g.is_folded());
        assert_eq!(g.rank(), 2);
        assert!(!g.contains(&w("y")));
        assert!(g.contains(&w("x")));
        let yp = w("y x y x^-1 y^-1");
        assert!(g.contains(&yp.mul(&w("x^-1")).mul(&yp)));
        assert!(g.contains(&Word::identity()));
    }

    #[test]
    fn ranks() {
        assert_eq!(SubgroupGraph::from_generators(&[w("x")]).rank(), 1);
        let g = SubgroupGraph::from_generators(&[w("x"), w("x^2")]);
        assert_eq!(g.rank(), 1);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(SubgroupGraph::from_generators(&[]).rank(), 0);
        // Conjugate generators: <y x y^-1> has a hanging stem at the base.
        let g = SubgroupGraph::from_generators(&[w("y x y^-1")]);
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&w("y x^-3 y^-1")));
        assert!(!g.contains(&w("x")));
        // Index-2 subgroup <x^2, y, x y x^-1> has rank 3.
        let g = SubgroupGraph::from_generators(&[w("x^2"), w("y"), w("x y x^-1")]);
        assert_eq!(g.rank(), 3);
        assert!(g.contains(&w("x y^5 x")));
    }
}
