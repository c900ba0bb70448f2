//! Fox derivatives with abelianized coefficients: the image of a word in the
//! free metabelian group `F/D²(F)`.
//!
//! `w ∈ D²(F)` iff every abelianized Fox derivative `∂w/∂x_i` vanishes in the
//! Laurent polynomial ring `Z[t_1^±, …, t_k^±]`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::words::Word;

/// Laurent polynomial in `k` commuting variables, integer coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<Vec<i64>, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The monomial `t^e`.
    pub fn monomial(e: Vec<i64>, c: i64) -> Self {
        let mut l = Self::zero();
        l.add_term(e, c);
        l
    }

    pub fn one(k: usize) -> Self {
        Self::monomial(vec![0; k], 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, e: &[i64]) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &i64)> {
        self.terms.iter()
    }

    /// Renders with the given variable names, e.g. `x^-1 y^-1 - x^-1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> LaurentDisplay<'a> {
        LaurentDisplay { p: self, names }
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

pub struct LaurentDisplay<'a> {
    p: &'a Laurent,
    names: &'a [String],
}

impl fmt::Display for LaurentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, &c)) in self.p.terms.iter().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    let name = self.names.get(i).cloned().unwrap_or_else(|| format!("t{i}"));
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            let mag = c.abs();
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            match (vars.is_empty(), mag) {
                (true, m) => write!(f, "{m}")?,
                (false, 1) => write!(f, "{}", vars.join(" "))?,
                (false, m) => write!(f, "{m} {}", vars.join(" "))?,
            }
        }
        Ok(())
    }
}

/// Image of a word in the free metabelian group of rank `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetabelianImage {
    pub exponents: Vec<i64>,
    pub fox: Vec<Laurent>,
}

impl MetabelianImage {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0) && self.fox.iter().all(Laurent::is_zero)
    }

    /// `Σ_i ∂_i (t_i - 1) == t^{exponents} - 1`.
    pub fn fundamental_identity_holds(&self) -> bool {
        let k = self.exponents.len();
        let one = Laurent::one(k);
        let mut lhs = Laurent::zero();
        for (i, d) in self.fox.iter().enumerate() {
            let mut e = vec![0; k];
            e[i] = 1;
            let ti_minus_one = &Laurent::monomial(e, 1) - &one;
            lhs = &lhs + &(d * &ti_minus_one);
        }
        let rhs = &Laurent::monomial(self.exponents.clone(), 1) - &one;
        lhs == rhs
    }
}

/// Abelianized Fox derivatives of `w` with respect to each of `k` generators.
pub fn metabelian_image(w: &Word, k: usize) -> MetabelianImage {
    let mut prefix = vec![0i64; k];
    let mut fox = vec![Laurent::zero(); k];
    for l in w.letters() {
        let g = l.generator();
        assert!(g < k, "letter outside alphabet");
        if l.is_inverse() {
            // ∂(u x^-1) = ∂u - t^{ab(u) - e_g}
            prefix[g] -= 1;
            fox[g].add_term(prefix.clone(), -1);
        } else {
            // ∂(u x) = ∂u + t^{ab(u)}
            fox[g].add_term(prefix.clone(), 1);
            prefix[g] += 1;
        }
    }
    MetabelianImage {
        exponents: prefix,
        fox,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{commutator, conjugate, parse_word};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn commutator_fox_vector() {
        let c = parse_word("[x,y]", &xy()).unwrap();
        let m = metabelian_image(&c, 2);
        assert_eq!(m.exponents, vec![0, 0]);
        // [x,y] = x^-1 y^-1 x y:
        //   ∂x = -x^-1 + x^-1 y^-1,  ∂y = -x^-1 y^-1 + y^-1.
        let mut dx = Laurent::monomial(vec![-1, 0], -1);
        dx.add_term(vec![-1, -1], 1);
        let mut dy = Laurent::monomial(vec![-1, -1], -1);
        dy.add_term(vec![0, -1], 1);
        assert_eq!(m.fox, vec![dx, dy]);
        assert!(!m.is_trivial());
        assert!(m.fundamental_identity_holds());

        // The other commutator convention x y x^-1 y^-1 gives (1 - y, x - 1).
        let c2 = parse_word("x y x^-1 y^-1", &xy()).unwrap();
        let m2 = metabelian_image(&c2, 2);
        let mut ex = Laurent::one(2);
        ex.add_term(vec![0, 1], -1);
        let mut ey = Laurent::monomial(vec![1, 0], 1);
        ey.add_term(vec![0, 0], -1);
        assert_eq!(m2.fox, vec![ex, ey]);
    }

    #[test]
    fn generator_and_second_derived_elements() {
        let m = metabelian_image(&Word::generator(0), 2);
        assert_eq!(m.exponents, vec![1, 0]);
        assert_eq!(m.fox, vec![Laurent::one(2), Laurent::zero()]);

        let c = parse_word("[x,y]", &xy()).unwrap();
        let cx = conjugate(&c, &Word::generator(0));
        let dd = commutator(&c, &cx);
        assert!(!dd.is_empty());
        assert!(metabelian_image(&dd, 2).is_trivial());
        assert!(!metabelian_image(&Word::generator(1), 2).is_trivial());
    }

    #[test]
    fn display() {
        let c = parse_word("x y x^-1 y^-1", &xy()).unwrap();
        let m = metabelian_image(&c, 2);
        assert_eq!(m.fox[1].display(&xy()).to_string(), "-1 + x");
    }
}
