//! Exact integer linear algebra: Smith normal form, abelian invariants and
//! abelianization of presentations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::words::{exponent_sums, Presentation, Word};

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Rows must all have length `cols`; `cols` is needed for the 0-row case.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            for i in rank + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                let g = a[(rank, c)].clone();
                for j in c..a.cols {
                    let v = &a[(i, j)] * &g - &a[(rank, j)] * &f;
                    a[(i, j)] = v;
                }
                a.normalize_row(i);
            }
            rank += 1;
        }
        rank
    }

    fn normalize_row(&mut self, i: usize) {
        let g = self
            .row(i)
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g > BigInt::one() {
            for j in 0..self.cols {
                let v = &self[(i, j)] / &g;
                self[(i, j)] = v;
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= f * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = f * &self[(src, j)];
            self[(dst, j)] -= v;
        }
    }

    /// col[dst] -= f * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = f * &self[(i, src)];
            self[(i, dst)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal(&self.d)
    }
}

fn diagonal(d: &IntMatrix) -> Vec<BigInt> {
    (0..d.rows.min(d.cols))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

/// Row and column operations, optionally mirrored into `U` and `V`.
struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn row_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.row_axpy(dst, src, f);
        if let Some(u) = &mut self.u {
            u.row_axpy(dst, src, f);
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.col_axpy(dst, src, f);
        if let Some(v) = &mut self.v {
            v.col_axpy(dst, src, f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Smallest nonzero |entry| in the trailing block from `(t, t)`.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Smallest nonzero |entry| in row `t` and column `t` beyond the pivot.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cells = (t + 1..self.a.rows)
            .map(|i| (i, t))
            .chain((t + 1..self.a.cols).map(|j| (t, j)));
        for (i, j) in cells {
            let x = &self.a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.a.rows.min(self.a.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear row t and column t by Euclidean steps.
                for i in t + 1..self.a.rows {
                    if !self.a[(i, t)].is_zero() {
                        let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                        self.row_axpy(i, t, &q);
                    }
                }
                for j in t + 1..self.a.cols {
                    if !self.a[(t, j)].is_zero() {
                        let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                        self.col_axpy(j, t, &q);
                    }
                }
                if let Some((i, j)) = self.smallest_in_cross(t) {
                    // A remainder smaller than the pivot survived.
                    if i != t {
                        self.swap_rows(t, i);
                    } else {
                        self.swap_cols(t, j);
                    }
                    continue;
                }
                // Divisibility: fold an offending row into row t and retry.
                let piv = self.a[(t, t)].clone();
                let bad = (t + 1..self.a.rows).find(|&i| {
                    (t + 1..self.a.cols).any(|j| !self.a[(i, j)].is_multiple_of(&piv))
                });
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        self.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with unimodular transforms: `u * m * v == d`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut r = Reducer {
        a: m.clone(),
        u: Some(IntMatrix::identity(m.rows)),
        v: Some(IntMatrix::identity(m.cols)),
    };
    r.run();
    SmithForm {
        d: r.a,
        u: r.u.unwrap(),
        v: r.v.unwrap(),
    }
}

/// Diagonal of the Smith normal form only, without tracking transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer {
        a: m.clone(),
        u: None,
        v: None,
    };
    r.run();
    diagonal(&r.a)
}

/// Invariants of a finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_s`
/// with `d_1 | d_2 | ... | d_s` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Number of coordinates in the canonical decomposition.
    pub fn dimension(&self) -> usize {
        self.torsion.len() + self.free_rank
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of `Z^k / rowspace(m)`, `k = m.cols()`.
pub fn abelian_invariants(m: &IntMatrix) -> AbelianInvariants {
    invariants_from_diagonal(m.cols, &smith_diagonal(m))
}

fn invariants_from_diagonal(k: usize, diag: &[BigInt]) -> AbelianInvariants {
    AbelianInvariants {
        free_rank: k - diag.len(),
        torsion: diag.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Exponent-sum matrix of a set of words, one row per word.
pub fn exponent_matrix(words: &[Word], k: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = words.iter().map(|w| exponent_sums(w, k)).collect();
    IntMatrix::from_rows(k, &rows)
}

/// The abelianization `Γ/D(Γ)` of a presented group together with the image of
/// each generator in the canonical decomposition.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub invariants: AbelianInvariants,
    /// Per generator: torsion coordinates (reduced mod `d_i`) then free ones.
    pub images: Vec<Vec<BigInt>>,
    change_of_basis: IntMatrix,
    /// SNF diagonal padded with zeros to `k`.
    moduli: Vec<BigInt>,
}

impl Abelianization {
    /// Image of an arbitrary word.
    pub fn image_of(&self, w: &Word) -> Vec<BigInt> {
        let k = self.change_of_basis.rows();
        let e = exponent_sums(w, k);
        let mut raw = vec![BigInt::zero(); k];
        for (i, ei) in e.iter().enumerate() {
            if *ei == 0 {
                continue;
            }
            for (j, slot) in raw.iter_mut().enumerate() {
                *slot += BigInt::from(*ei) * &self.change_of_basis[(i, j)];
            }
        }
        self.canonical(&raw)
    }

    fn canonical(&self, raw: &[BigInt]) -> Vec<BigInt> {
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (x, d) in raw.iter().zip(&self.moduli) {
            if d.is_zero() {
                free.push(x.clone());
            } else if !d.is_one() {
                torsion.push(x.mod_floor(d));
            }
        }
        torsion.extend(free);
        torsion
    }
}

/// Abelianization of a presentation via the relator exponent matrix.
pub fn abelianize(p: &Presentation) -> Abelianization {
    let k = p.rank();
    let m = exponent_matrix(p.relators(), k);
    let snf = smith_normal_form(&m);
    let diag = snf.invariant_factors();
    let mut moduli = diag.clone();
    moduli.resize(k, BigInt::zero());
    let invariants = invariants_from_diagonal(k, &diag);
    let mut ab = Abelianization {
        invariants,
        images: Vec::new(),
        change_of_basis: snf.v,
        moduli,
    };
    // Row i of V is the image of generator i: x -> xV carries rowspace(m) onto rowspace(D).
    ab.images = (0..k)
        .map(|i| ab.canonical(ab.change_of_basis.row(i)))
        .collect();
    ab
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::invariant_factors_by_minors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U m V != D for {m:?}");
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let diag = s.invariant_factors();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]), "chain broken: {diag:?}");
        }
        assert!(diag.iter().all(|d| d.is_positive()));
        // Zeros only trail.
        for i in diag.len()..m.rows().min(m.cols()) {
            assert!(s.d[(i, i)].is_zero());
        }
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::identity(2));
        assert_eq!(s.invariant_factors(), big(&[1, 1]));
        let s = check_snf(&IntMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors(), big(&[2, 4]));
        let s = check_snf(&IntMatrix::from_rows(2, &[vec![-1, 0]]));
        assert_eq!(s.d, IntMatrix::from_rows(2, &[vec![1, 0]]));
    }

    #[test]
    fn snf_degenerate_shapes() {
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(3, 0));
        check_snf(&IntMatrix::zeros(2, 2));
        let s = check_snf(&IntMatrix::from_rows(3, &[vec![0, 0, 6], vec![0, 4, 0]]));
        assert_eq!(s.invariant_factors(), big(&[2, 12]));
    }

    #[test]
    fn invariants_examples() {
        let f2 = abelian_invariants(&IntMatrix::zeros(0, 2));
        assert_eq!(f2, AbelianInvariants::free(2));
        let bs = abelian_invariants(&IntMatrix::from_rows(2, &[vec![-1, 0]]));
        assert_eq!(bs, AbelianInvariants::free(1));
        let t = abelian_invariants(&IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(t.free_rank, 0);
        assert_eq!(t.torsion, big(&[6]));
        assert_eq!(t.to_string(), "Z/6");
        assert_eq!(
            AbelianInvariants {
                free_rank: 2,
                torsion: big(&[6])
            }
            .to_string(),
            "Z^2 + Z/6"
        );
        assert_eq!(AbelianInvariants::free(0).to_string(), "0");
    }

    #[test]
    fn abelianize_one_relator_examples() {
        let p = Presentation::parse("<a,b | a = [a, a^b]>").unwrap();
        let ab = abelianize(&p);
        assert_eq!(ab.invariants, AbelianInvariants::free(1));
        assert_eq!(ab.images[0], big(&[0]));
        assert!(ab.images[1] == big(&[1]) || ab.images[1] == big(&[-1]));
        assert_eq!(ab.image_of(&p.parse_word("[a,b] a^3").unwrap()), big(&[0]));

        let bs = Presentation::parse("<a, t | t a^2 t^-1 a^-3>").unwrap();
        assert_eq!(abelianize(&bs).invariants, AbelianInvariants::free(1));

        let z6 = Presentation::parse("<x, y | x^2, y^3, [x,y]>").unwrap();
        let ab = abelianize(&z6);
        assert_eq!(ab.invariants.torsion, big(&[6]));
        // x has order 2 and y order 3 in Z/6.
        let x = &ab.images[0][0];
        let y = &ab.images[1][0];
        assert_eq!((x * BigInt::from(2)).mod_floor(&BigInt::from(6)), BigInt::zero());
        assert!(!x.is_zero());
        assert_eq!((y * BigInt::from(3)).mod_floor(&BigInt::from(6)), BigInt::zero());
        assert!(!y.is_zero());
    }

    #[test]
    fn rank_and_determinant() {
        let m = IntMatrix::from_rows(3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant(), BigInt::zero());
        let m = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
        let r = rng.gen_range(1..=6);
        let c = rng.gen_range(1..=6);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect())
            .collect();
        IntMatrix::from_rows(c, &rows)
    }

    #[test]
    fn snf_agrees_with_minor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let m = random_matrix(&mut rng);
            let s = check_snf(&m);
            assert_eq!(s.invariant_factors(), invariant_factors_by_minors(&m), "{m:?}");
            assert_eq!(smith_diagonal(&m), s.invariant_factors());
        }
    }

    #[test]
    fn invariants_stable_under_row_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_matrix(&mut rng);
            let base = abelian_invariants(&m);
            let mut rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            rows.reverse();
            rows[0] = rows[0].iter().map(|x| -x).collect();
            if rows.len() > 1 {
                let r1 = rows[1].clone();
                for (a, b) in rows[0].iter_mut().zip(r1) {
                    *a += b;
                }
            }
            let moved = IntMatrix::from_rows(m.cols(), &rows);
            assert_eq!(abelian_invariants(&moved), base);
        }
    }
}
