//! Truncated Magnus expansion `x_i ↦ 1 + X_i` into noncommutative power
//! series over the integers.
//!
//! A word lies in the `j`-th lower central term `C^j(F)` exactly when its
//! image is `1` modulo terms of degree `>= j`. This identification is a
//! classical fact about free groups and is trusted here, not recomputed.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::words::{Letter, Word};

#[derive(Clone, Debug)]
enum Coeffs {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// Series truncated above degree `cutoff`, coefficients indexed densely by
/// monomial (base-`k` digit strings, first letter most significant).
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    k: usize,
    cutoff: usize,
    offsets: Vec<usize>,
    coeffs: Coeffs,
}

fn degree_offsets(k: usize, cutoff: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(cutoff + 2);
    let mut acc = 0usize;
    let mut width = 1usize;
    for _ in 0..=cutoff {
        offsets.push(acc);
        acc += width;
        width *= k;
    }
    offsets.push(acc);
    offsets
}

impl TruncatedSeries {
    pub fn one(k: usize, cutoff: usize) -> Self {
        let offsets = degree_offsets(k, cutoff);
        let mut c = vec![0i64; offsets[cutoff + 1]];
        c[0] = 1;
        TruncatedSeries {
            k,
            cutoff,
            offsets,
            coeffs: Coeffs::Small(c),
        }
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of stored monomials, all degrees up to the cutoff.
    pub fn len(&self) -> usize {
        self.offsets[self.cutoff + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn index_of(&self, monomial: &[usize]) -> Option<usize> {
        if monomial.len() > self.cutoff {
            return None;
        }
        let mut idx = 0usize;
        for &s in monomial {
            assert!(s < self.k, "symbol {s} outside alphabet of size {}", self.k);
            idx = idx * self.k + s;
        }
        Some(self.offsets[monomial.len()] + idx)
    }

    /// Coefficient of the monomial `X_{m_1} X_{m_2} ...`; zero above the cutoff.
    pub fn coefficient(&self, monomial: &[usize]) -> BigInt {
        match self.index_of(monomial) {
            Some(i) => self.coeff_at(i),
            None => BigInt::zero(),
        }
    }

    fn coeff_at(&self, i: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Small(v) => BigInt::from(v[i]),
            Coeffs::Big(v) => v[i].clone(),
        }
    }

    /// Coefficients of degree `d`, in monomial index order.
    pub fn homogeneous(&self, d: usize) -> Vec<BigInt> {
        if d > self.cutoff {
            return Vec::new();
        }
        (self.offsets[d]..self.offsets[d + 1])
            .map(|i| self.coeff_at(i))
            .collect()
    }

    /// Least degree `>= 1` carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        (1..=self.cutoff).find(|&d| {
            (self.offsets[d]..self.offsets[d + 1]).any(|i| match &self.coeffs {
                Coeffs::Small(v) => v[i] != 0,
                Coeffs::Big(v) => !v[i].is_zero(),
            })
        })
    }

    pub fn is_one(&self) -> bool {
        self.lowest_degree().is_none() && self.coeff_at(0) == BigInt::from(1)
    }

    fn promote(&mut self) {
        if let Coeffs::Small(v) = &self.coeffs {
            self.coeffs = Coeffs::Big(v.iter().map(|&x| BigInt::from(x)).collect());
        }
    }

    /// Right multiplication by `1 + X_s`, or by its inverse `Σ (-X_s)^n`.
    pub fn mul_letter(&mut self, l: Letter) {
        let s = l.generator();
        assert!(s < self.k, "letter outside alphabet");
        let inverse = l.is_inverse();
        if let Coeffs::Small(v) = &self.coeffs {
            match self.step_small(v, s, inverse) {
                Some(out) => {
                    self.coeffs = Coeffs::Small(out);
                    return;
                }
                None => self.promote(),
            }
        }
        let Coeffs::Big(v) = &mut self.coeffs else {
            unreachable!()
        };
        let (offsets, k) = (&self.offsets, self.k);
        if inverse {
            // T = S - T X_s, ascending degree so T[prefix] is already final.
            for d in 1..=self.cutoff {
                for m in (offsets[d] + s..offsets[d + 1]).step_by(k) {
                    let p = offsets[d - 1] + (m - offsets[d]) / k;
                    let t = v[p].clone();
                    v[m] -= t;
                }
            }
        } else {
            // T = S + S X_s, descending degree so S[prefix] is still original.
            for d in (1..=self.cutoff).rev() {
                for m in (offsets[d] + s..offsets[d + 1]).step_by(k) {
                    let p = offsets[d - 1] + (m - offsets[d]) / k;
                    let t = v[p].clone();
                    v[m] += t;
                }
            }
        }
    }

    /// `None` on i64 overflow.
    fn step_small(&self, v: &[i64], s: usize, inverse: bool) -> Option<Vec<i64>> {
        let (offsets, k) = (&self.offsets, self.k);
        let mut out = v.to_vec();
        for d in 1..=self.cutoff {
            for m in (offsets[d] + s..offsets[d + 1]).step_by(k) {
                let p = offsets[d - 1] + (m - offsets[d]) / k;
                out[m] = if inverse {
                    out[m].checked_sub(out[p])?
                } else {
                    v[m].checked_add(v[p])?
                };
            }
        }
        Some(out)
    }

    /// Truncated product of two series over the same alphabet and cutoff.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.k, other.k);
        assert_eq!(self.cutoff, other.cutoff);
        let mut out = vec![BigInt::zero(); self.len()];
        let mut pow = vec![1usize; self.cutoff + 1];
        for d in 1..=self.cutoff {
            pow[d] = pow[d - 1] * self.k;
        }
        for da in 0..=self.cutoff {
            for ia in self.offsets[da]..self.offsets[da + 1] {
                let a = self.coeff_at(ia);
                if a.is_zero() {
                    continue;
                }
                let la = ia - self.offsets[da];
                for db in 0..=self.cutoff - da {
                    for ib in other.offsets[db]..other.offsets[db + 1] {
                        let b = other.coeff_at(ib);
                        if b.is_zero() {
                            continue;
                        }
                        let lb = ib - other.offsets[db];
                        let idx = self.offsets[da + db] + la * pow[db] + lb;
                        out[idx] += &a * &b;
                    }
                }
            }
        }
        let mut s = TruncatedSeries {
            k: self.k,
            cutoff: self.cutoff,
            offsets: self.offsets.clone(),
            coeffs: Coeffs::Big(out),
        };
        s.demote();
        s
    }

    fn demote(&mut self) {
        if let Coeffs::Big(v) = &self.coeffs {
            let small: Option<Vec<i64>> = v.iter().map(|x| x.to_i64()).collect();
            if let Some(s) = small {
                self.coeffs = Coeffs::Small(s);
            }
        }
    }

    /// Renders with upper-cased generator names, e.g. `1 + XY - YX`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> SeriesDisplay<'a> {
        SeriesDisplay { s: self, names }
    }

    fn monomial_of(&self, d: usize, m: usize) -> Vec<usize> {
        let mut local = m - self.offsets[d];
        let mut out = vec![0; d];
        for slot in out.iter_mut().rev() {
            *slot = local % self.k;
            local /= self.k;
        }
        out
    }

    /// Nonzero terms as (monomial, coefficient), by degree then index.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigInt)> {
        let mut out = Vec::new();
        for d in 0..=self.cutoff {
            for m in self.offsets[d]..self.offsets[d + 1] {
                let c = self.coeff_at(m);
                if !c.is_zero() {
                    out.push((self.monomial_of(d, m), c));
                }
            }
        }
        out
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.cutoff == other.cutoff
            && (0..self.len()).all(|i| self.coeff_at(i) == other.coeff_at(i))
    }
}

impl Eq for TruncatedSeries {}

pub struct SeriesDisplay<'a> {
    s: &'a TruncatedSeries,
    names: &'a [String],
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.s.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (mono, c)) in terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let word: String = mono
                .iter()
                .map(|&i| {
                    self.names
                        .get(i)
                        .map(|s| s.to_uppercase())
                        .unwrap_or_else(|| format!("X{i}"))
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == BigInt::from(1) {
                write!(f, "{word}")?;
            } else {
                write!(f, "{mag}{word}")?;
            }
        }
        Ok(())
    }
}

/// Magnus image of `w` over an alphabet of size `k`, truncated above degree `cutoff`.
pub fn magnus_image(w: &Word, k: usize, cutoff: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(k, cutoff);
    for &l in w.letters() {
        s.mul_letter(l);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{commutator, parse_word};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn images_of_small_words() {
        let one = magnus_image(&Word::identity(), 2, 3);
        assert!(one.is_one());
        let c = parse_word("[x,y]", &xy()).unwrap();
        let s = magnus_image(&c, 2, 2);
        assert_eq!(s.display(&xy()).to_string(), "1 + XY - YX");
        let t = magnus_image(&Word::from_letters(vec![Letter::pos(0), Letter::neg(0)]), 2, 4);
        assert!(t.is_one());
    }

    #[test]
    fn inverse_generator_series() {
        let s = magnus_image(&Word::from_letters(vec![Letter::neg(0)]), 1, 5);
        let got: Vec<i64> = (0..=5)
            .map(|d| s.coefficient(&vec![0; d]).try_into().unwrap())
            .collect();
        assert_eq!(got, vec![1, -1, 1, -1, 1, -1]);
    }

    /// Expands the product of factor series directly: every choice of one term
    /// per letter, collected by monomial.
    fn brute_force_coefficient(w: &Word, monomial: &[usize]) -> i64 {
        // Letter series: x -> 1 + X, x^-1 -> sum (-X)^n.
        fn go(letters: &[Letter], target: &[usize]) -> i64 {
            match letters.split_first() {
                None => i64::from(target.is_empty()),
                Some((l, rest)) => {
                    let s = l.generator();
                    let mut total = 0;
                    let max_take = if l.is_inverse() { target.len() } else { target.len().min(1) };
                    for n in 0..=max_take {
                        if target[..n].iter().all(|&t| t == s) {
                            let sign = if l.is_inverse() && n % 2 == 1 { -1 } else { 1 };
                            total += sign * go(rest, &target[n..]);
                        }
                    }
                    total
                }
            }
        }
        go(w.letters(), monomial)
    }

    #[test]
    fn agrees_with_brute_force_expansion() {
        let w = parse_word("[[x,y],y] x^-2 y", &xy()).unwrap();
        let s = magnus_image(&w, 2, 4);
        for (mono, c) in s.terms() {
            assert_eq!(c, BigInt::from(brute_force_coefficient(&w, &mono)), "{mono:?}");
        }
        for mono in [vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0, 0]] {
            assert_eq!(
                s.coefficient(&mono),
                BigInt::from(brute_force_coefficient(&w, &mono))
            );
        }
        let c = commutator(&Word::generator(0), &Word::generator(1));
        let s = magnus_image(&c, 2, 3);
        assert_eq!(s.coefficient(&[0, 1]), BigInt::from(1));
        assert_eq!(s.coefficient(&[1, 0]), BigInt::from(-1));
    }

    #[test]
    fn overflow_escalates_to_big_integers() {
        // (x^-1)^N has coefficient ±C(N+d-1, d) at X^d, past i64 for large N.
        let w = Word::from_powers(&[(0, -4000)]);
        let s = magnus_image(&w, 1, 8);
        // C(4007, 8) = 4007! / (8! 3999!)
        let mut expect = BigInt::from(1);
        for i in 0..8u32 {
            expect = expect * BigInt::from(4007 - i);
        }
        expect /= BigInt::from(40320);
        assert_eq!(s.coefficient(&[0; 8]), expect);
        let w = Word::from_powers(&[(0, 1_000_000)]);
        let s = magnus_image(&w, 1, 4);
        // C(10^6 + 3, 4) ~ 4.2e22 does not fit in i64.
        let n = BigInt::from(1_000_000u64);
        let expect = &n * (&n - 1) * (&n - 2) * (&n - 3) / BigInt::from(24);
        // x^N: coefficient of X^4 is C(N, 4).
        assert_eq!(s.coefficient(&[0; 4]), expect);
    }
}
