use std::fmt;

use thiserror::Error;

/// A permutation of `{0, …, n-1}` acting on the right: `i^(p*q) = (i^p)^q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a bijection of 0..{0}")]
    NotBijective(usize),
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in a cycle")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    Syntax(String),
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for &p in c {
                if p >= n {
                    return Err(PermError::OutOfRange { point: p, degree: n });
                }
                if used[p] {
                    return Err(PermError::RepeatedPoint(p));
                }
                used[p] = true;
            }
            for (i, &p) in c.iter().enumerate() {
                images[p] = c[(i + 1) % c.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)` or `()`. Commas are allowed
    /// as separators inside a cycle.
    pub fn parse(n: usize, text: &str) -> Result<Self, PermError> {
        let t = text.trim();
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if rest_trim.is_empty() {
                break;
            }
            if !rest_trim.starts_with('(') {
                return Err(PermError::Syntax(text.to_string()));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let body = &rest_trim[1..close];
            let pts: Result<Vec<usize>, _> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(str::parse::<usize>)
                .collect();
            let pts = pts.map_err(|_| PermError::Syntax(text.to_string()))?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = &rest_trim[close + 1..];
        }
        Self::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .mul(&other.inverse())
            .mul(self)
            .mul(other)
    }

    /// `by^-1 self by`.
    pub fn conjugate_by(&self, by: &Permutation) -> Permutation {
        by.inverse().mul(self).mul(by)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.image(s) == s {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.image(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.image(x);
            }
            out.push(c);
        }
        out
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc / gcd(acc, c.len() as u64) * c.len() as u64)
    }

    /// Pads with fixed points up to degree `n`.
    pub fn extend_to(&self, n: usize) -> Permutation {
        assert!(n >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..n as u32);
        Permutation { images }
    }

    /// Disjoint sum: `self` on the first block, `other` shifted after it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let off = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + off));
        Permutation { images }
    }

    /// First point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(p.order(), 6);
        assert!(Permutation::parse(3, "()").unwrap().is_identity());
        assert!(Permutation::parse(3, "(0 3)").is_err());
        assert!(Permutation::parse(3, "(0 1 0)").is_err());
        assert!(Permutation::parse(3, "0 1").is_err());
        assert_eq!(
            Permutation::parse(4, "(0, 1)(2,3)").unwrap(),
            Permutation::from_images(vec![1, 0, 3, 2]).unwrap()
        );
    }

    #[test]
    fn right_action_convention() {
        let a = Permutation::parse(3, "(0 1)").unwrap();
        let b = Permutation::parse(3, "(1 2)").unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.mul(&b).image(0), 2);
        assert_eq!(a.mul(&a.inverse()), Permutation::identity(3));
        assert_eq!(a.pow(-3), a);
        let c = a.commutator(&b);
        assert_eq!(c, a.inverse().mul(&b.inverse()).mul(&a).mul(&b));
        assert_eq!(c.order(), 3);
    }
}
