//! Matrix groups over `Z/m`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::group::PermGroup;
use super::perm::Permutation;
use super::FiniteError;

/// Default element cap for breadth-first closure.
pub const DEFAULT_MATRIX_CAP: usize = 1 << 24;

/// A `d × d` matrix over `Z/m`, row-major, entries in `0..m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModMatrix {
    d: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(d: usize, modulus: u64, entries: Vec<i64>) -> Result<Self, FiniteError> {
        if modulus < 2 {
            return Err(FiniteError::BadModulus(modulus));
        }
        if entries.len() != d * d {
            return Err(FiniteError::Shape {
                expected: d * d,
                found: entries.len(),
            });
        }
        let m = modulus as i64;
        Ok(ModMatrix {
            d,
            modulus,
            entries: entries.into_iter().map(|x| x.rem_euclid(m) as u64).collect(),
        })
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self, FiniteError> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(FiniteError::Shape {
                expected: d,
                found: rows.iter().map(Vec::len).find(|&l| l != d).unwrap_or(d),
            });
        }
        Self::new(d, modulus, rows.concat())
    }

    pub fn identity(d: usize, modulus: u64) -> Self {
        let mut e = vec![0; d * d];
        for i in 0..d {
            e[i * d + i] = 1 % modulus;
        }
        ModMatrix {
            d,
            modulus,
            entries: e,
        }
    }

    /// `I + scale · E_ij`.
    pub fn elementary(d: usize, modulus: u64, i: usize, j: usize, scale: i64) -> Self {
        let mut m = Self::identity(d, modulus);
        let s = scale.rem_euclid(modulus as i64) as u64;
        m.entries[i * d + j] = (m.entries[i * d + j] + s) % modulus;
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.d + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.d, self.modulus)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.d, other.d);
        assert_eq!(self.modulus, other.modulus);
        let d = self.d;
        let m = self.modulus as u128;
        let mut e = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc: u128 = 0;
                for k in 0..d {
                    acc += self.entries[i * d + k] as u128 * other.entries[k * d + j] as u128;
                }
                e[i * d + j] = (acc % m) as u64;
            }
        }
        ModMatrix {
            d,
            modulus: self.modulus,
            entries: e,
        }
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        ModMatrix {
            d: self.d,
            modulus: self.modulus,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % self.modulus)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        let m = self.modulus;
        ModMatrix {
            d: self.d,
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
        }
    }

    /// Reduction to a modulus dividing the current one.
    pub fn reduce(&self, modulus: u64) -> ModMatrix {
        assert!(modulus >= 2 && self.modulus % modulus == 0);
        ModMatrix {
            d: self.d,
            modulus,
            entries: self.entries.iter().map(|x| x % modulus).collect(),
        }
    }

    /// Determinant by cofactor expansion over `Z`, then reduced.
    pub fn determinant(&self) -> u64 {
        fn det(rows: &[Vec<i128>]) -> i128 {
            let n = rows.len();
            if n == 0 {
                return 1;
            }
            if n == 1 {
                return rows[0][0];
            }
            let mut acc = 0;
            for j in 0..n {
                if rows[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let t = rows[0][j] * det(&minor);
                acc += if j % 2 == 0 { t } else { -t };
            }
            acc
        }
        let rows: Vec<Vec<i128>> = (0..self.d)
            .map(|i| (0..self.d).map(|j| self.get(i, j) as i128).collect())
            .collect();
        det(&rows).rem_euclid(self.modulus as i128) as u64
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.determinant(), self.modulus) == 1
    }

    /// Right action on row vectors: `v ↦ v M`.
    pub fn act(&self, v: &[u64]) -> Vec<u64> {
        let d = self.d;
        let m = self.modulus as u128;
        (0..d)
            .map(|j| {
                let s: u128 = (0..d)
                    .map(|i| v[i] as u128 * self.entries[i * d + j] as u128)
                    .sum();
                (s % m) as u64
            })
            .collect()
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = (0..self.d).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Group generated by invertible matrices over `Z/m`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    d: usize,
    modulus: u64,
    gens: Vec<ModMatrix>,
}

impl MatrixGroup {
    pub fn new(d: usize, modulus: u64, gens: Vec<ModMatrix>) -> Result<Self, FiniteError> {
        if modulus < 2 {
            return Err(FiniteError::BadModulus(modulus));
        }
        for g in &gens {
            if g.dim() != d || g.modulus() != modulus {
                return Err(FiniteError::Shape {
                    expected: d,
                    found: g.dim(),
                });
            }
            if !g.is_invertible() {
                return Err(FiniteError::NotInvertible(g.to_string()));
            }
        }
        Ok(MatrixGroup { d, modulus, gens })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.gens
    }

    /// Breadth-first closure; fails past `cap` elements.
    pub fn elements(&self, cap: usize) -> Result<Vec<ModMatrix>, FiniteError> {
        let id = ModMatrix::identity(self.d, self.modulus);
        let mut seen: HashSet<ModMatrix> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.gens {
                let y = out[i].mul(g);
                if !seen.contains(&y) {
                    if out.len() >= cap {
                        return Err(FiniteError::CapExceeded {
                            what: "matrix group closure",
                            cap: cap as u128,
                        });
                    }
                    seen.insert(y.clone());
                    out.push(y);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    pub fn order(&self, cap: usize) -> Result<u64, FiniteError> {
        Ok(self.elements(cap)?.len() as u64)
    }

    /// Number of points `m^d` of the natural module.
    pub fn module_size(&self) -> Option<usize> {
        (self.modulus as usize).checked_pow(self.d as u32)
    }

    /// Faithful action on the row vectors `(Z/m)^d`, vectors indexed in base `m`
    /// with the first coordinate most significant.
    pub fn to_permutation_group(&self, max_degree: usize) -> Result<PermGroup, FiniteError> {
        let n = self
            .module_size()
            .filter(|&n| n <= max_degree)
            .ok_or(FiniteError::CapExceeded {
                what: "permutation degree",
                cap: max_degree as u128,
            })?;
        let gens = self.gens.iter().map(|g| self.permutation_of(g)).collect();
        PermGroup::new(n, gens)
    }

    pub fn permutation_of(&self, g: &ModMatrix) -> Permutation {
        let n = self.module_size().expect("module fits");
        let m = self.modulus;
        let d = self.d;
        let index = |v: &[u64]| v.iter().fold(0usize, |acc, &x| acc * m as usize + x as usize);
        let mut img = vec![0u32; n];
        let mut v = vec![0u64; d];
        for (p, slot) in img.iter_mut().enumerate() {
            let mut r = p;
            for i in (0..d).rev() {
                v[i] = (r % m as usize) as u64;
                r /= m as usize;
            }
            *slot = index(&g.act(&v)) as u32;
        }
        Permutation::from_images_unchecked(img)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn sl2_mod_3() {
        let a = ModMatrix::from_rows(3, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = ModMatrix::from_rows(3, &[vec![1, 0], vec![1, 1]]).unwrap();
        let g = MatrixGroup::new(2, 3, vec![a, b]).unwrap();
        assert_eq!(g.order(1000).unwrap(), 24);
        assert!(g.order(10).is_err());
        let p = g.to_permutation_group(100).unwrap();
        assert_eq!(p.degree(), 9);
        assert_eq!(p.order(), BigUint::from(24u32));
    }

    #[test]
    fn determinant_and_action() {
        let a = ModMatrix::from_rows(4, &[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(a.determinant(), 1);
        let b = ModMatrix::from_rows(4, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!b.is_invertible());
        assert!(MatrixGroup::new(2, 4, vec![b]).is_err());
        let v = [1, 0];
        assert_eq!(a.mul(&a).act(&v), a.act(&a.act(&v)));
        assert!(ModMatrix::from_rows(4, &[vec![1, 0], vec![0]]).is_err());
        assert_eq!(a.to_string(), "[2 1; 1 1] mod 4");
    }
}
