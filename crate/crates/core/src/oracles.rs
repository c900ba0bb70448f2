//! Brute-force reference computations.
//!
//! Each function here takes the slow, obviously-correct route and shares no
//! code with the production path it is used to cross-check.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::finite::{PermGroup, Permutation};
use crate::zlattice::IntMatrix;

/// Determinant by cofactor expansion along the first row.
pub fn determinant_by_cofactors(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * determinant_by_cofactors(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `d_k / d_{k-1}` from the determinantal divisors
/// `d_k = gcd of all k×k minors`.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect();
                g = g.gcd(&determinant_by_cofactors(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Checks a claimed Smith form of `m`: `u · m · v = d`, `u` and `v` have
/// determinant `±1` (by cofactors), `d` is diagonal with nonnegative entries
/// each dividing the next, and its nonzero diagonal equals the determinantal
/// divisor quotients of `m`.
pub fn check_smith_form(m: &IntMatrix, u: &IntMatrix, d: &IntMatrix, v: &IntMatrix) -> Result<(), String> {
    if &u.mul(m).mul(v) != d {
        return Err("u * m * v != d".into());
    }
    let rows = |a: &IntMatrix| -> Vec<Vec<BigInt>> { (0..a.rows()).map(|i| a.row(i).to_vec()).collect() };
    for (name, t) in [("u", u), ("v", v)] {
        if !determinant_by_cofactors(&rows(t)).abs().is_one() {
            return Err(format!("{name} is not unimodular"));
        }
    }
    if !d.is_diagonal() {
        return Err("d is not diagonal".into());
    }
    let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
    if diag.iter().any(|x| x < &BigInt::zero()) {
        return Err("negative diagonal entry".into());
    }
    for w in diag.windows(2) {
        let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !divides {
            return Err(format!("{} does not divide {}", w[0], w[1]));
        }
    }
    let nonzero: Vec<BigInt> = diag.into_iter().take_while(|x| !x.is_zero()).collect();
    if nonzero != invariant_factors_by_minors(m) {
        return Err("diagonal differs from the determinantal divisors".into());
    }
    Ok(())
}

/// All elements of the permutation group generated by `gens` (as image arrays),
/// by breadth-first closure. Returns `None` past `cap` elements.
pub fn enumerate_permutations(degree: usize, gens: &[Vec<u32>], cap: usize) -> Option<HashSet<Vec<u32>>> {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            // x then g
            let y: Vec<u32> = x.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen)
}

/// Elements of the subgroup generated by all perfect subgroups of `g`, found by
/// walking the whole subgroup lattice (every subgroup is a join of cyclic
/// subgroups). Returns `None` when `|g| > cap` or the lattice is too large.
pub fn perfect_core_by_lattice(g: &PermGroup, cap: usize) -> Option<Vec<Permutation>> {
    const MAX_SUBGROUPS: usize = 100_000;
    let raw: Vec<Vec<u32>> = g.generators().iter().map(|p| p.images().to_vec()).collect();
    let mut elems: Vec<Vec<u32>> = enumerate_permutations(g.degree(), &raw, cap)?
        .into_iter()
        .collect();
    elems.sort();
    let n = elems.len();
    let index: HashMap<Vec<u32>, usize> =
        elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().map(|&i| b[i as usize]).collect() };
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = index[&compose(&elems[i], &elems[j])] as u32;
        }
    }
    let id = index[&(0..g.degree() as u32).collect::<Vec<u32>>()];
    let inv: Vec<usize> = (0..n)
        .map(|i| (0..n).find(|&j| table[i * n + j] as usize == id).unwrap())
        .collect();
    let mul = |a: usize, b: usize| table[a * n + b] as usize;

    // Subgroup generated by `gens`, as a membership vector.
    let close = |gens: &[usize]| -> Vec<bool> {
        let mut inside = vec![false; n];
        inside[id] = true;
        let mut list = vec![id];
        let mut k = 0;
        while k < list.len() {
            for &s in gens {
                let y = mul(list[k], s);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            k += 1;
        }
        inside
    };

    let mut lattice: HashSet<Vec<bool>> = HashSet::new();
    let mut queue: Vec<(Vec<usize>, Vec<bool>)> = Vec::new();
    let mut cyclic: Vec<(usize, Vec<bool>)> = Vec::new();
    for x in 0..n {
        let c = close(&[x]);
        if lattice.insert(c.clone()) {
            cyclic.push((x, c.clone()));
            queue.push((vec![x], c));
        }
    }
    let mut perfect_gens: Vec<usize> = Vec::new();
    while let Some((gens, set)) = queue.pop() {
        // Perfect iff the normal closure of the generator commutators is everything.
        let mut seeds: Vec<usize> = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let c = mul(mul(inv[a], inv[b]), mul(a, b));
                seeds.push(c);
            }
        }
        let mut d = close(&seeds);
        loop {
            let members: Vec<usize> = (0..n).filter(|&i| d[i]).collect();
            let mut grew = false;
            for &m in &members {
                for &s in &gens {
                    let c = mul(mul(inv[s], m), s);
                    if !d[c] {
                        seeds.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
            d = close(&seeds);
        }
        if d == set {
            perfect_gens.extend(gens.iter().copied());
        }
        for (x, c) in &cyclic {
            if c.iter().zip(&set).any(|(&ci, &si)| ci && !si) {
                let mut jg = gens.clone();
                jg.push(*x);
                let j = close(&jg);
                if lattice.insert(j.clone()) {
                    if lattice.len() > MAX_SUBGROUPS {
                        return None;
                    }
                    queue.push((jg, j));
                }
            }
        }
    }
    let core = close(&perfect_gens);
    Some(
        (0..n)
            .filter(|&i| core[i])
            .map(|i| Permutation::from_images(elems[i].clone()).unwrap())
            .collect(),
    )
}

/// Number of Lyndon words of length `n` over `k` letters,
/// `(1/n) Σ_{d | n} μ(d) k^{n/d}`.
pub fn necklace_count(k: u64, n: u32) -> u64 {
    fn mobius(mut n: u32) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            total += mobius(d) as i128 * (k as i128).pow(n / d);
        }
    }
    (total / n as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklaces() {
        let got: Vec<u64> = (1..=6).map(|n| necklace_count(2, n)).collect();
        assert_eq!(got, vec![2, 1, 2, 3, 6, 9]);
        assert_eq!(necklace_count(1, 1), 1);
        assert_eq!(necklace_count(1, 2), 0);
        assert_eq!(necklace_count(3, 2), 3);
    }

    #[test]
    fn enumeration_of_sym4() {
        let g = vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        assert_eq!(enumerate_permutations(4, &g, 100).unwrap().len(), 24);
        assert!(enumerate_permutations(4, &g, 10).is_none());
    }

    #[test]
    fn minors_oracle_small() {
        let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(
            invariant_factors_by_minors(&m),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }
}
