//! Congruence filtration of `SL_d(Z)` and `GL_d(Z)` at a prime `p`.
//!
//! `L_a` is the kernel of reduction `Z/p^a → Z/p^{a-1}` inside `GL_d(Z/p^a)`
//! (or `SL_d`): the matrices `I + p^{a-1} A` with `A` over `Z/p`. For `a ≥ 2`
//! the square of `p^{a-1}` vanishes mod `p^a`, so the layer multiplies like the
//! additive group of the `A`s.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite::{biguint_is_power_of, FiniteError, MatrixGroup, ModMatrix, Permutation};
use crate::tower::{QuotientTower, TowerError};

/// Most candidate matrices a layer enumeration will visit.
pub const LAYER_CAP: u64 = 1 << 21;

/// Largest permutation degree `p^{a d}` used for tower stages.
pub const TOWER_DEGREE_CAP: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("level a = {0} too small: layers need a >= 2")]
    LevelTooSmall(u32),
    #[error("{what}: {size} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, size: String, cap: u64 },
    #[error("dimension must be at least 1")]
    Dimension,
    #[error(transparent)]
    Finite(#[from] FiniteError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sl,
    Gl,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Sl => "SL",
            Variant::Gl => "GL",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Variant::Sl),
            "gl" => Ok(Variant::Gl),
            _ => Err(format!("unknown variant `{s}` (expected sl or gl)")),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn checked_pow(p: u64, e: u64, what: &'static str, cap: u64) -> Result<u64, CongruenceError> {
    let too_big = || CongruenceError::CapExceeded {
        what,
        size: format!("{p}^{e}"),
        cap,
    };
    let v = u32::try_from(e).ok().and_then(|e| p.checked_pow(e)).ok_or_else(too_big)?;
    if v > cap {
        return Err(too_big());
    }
    Ok(v)
}

fn check_args(d: usize, p: u64) -> Result<(), CongruenceError> {
    if d == 0 {
        return Err(CongruenceError::Dimension);
    }
    if !is_prime(p) {
        return Err(CongruenceError::NotPrime(p));
    }
    Ok(())
}

/// The layer `{x ≡ I mod p^{a-1}}` in `SL_d(Z/p^a)` or `GL_d(Z/p^a)`.
#[derive(Debug, Clone)]
pub struct CongruenceLayer {
    pub d: usize,
    pub p: u64,
    pub a: u32,
    pub variant: Variant,
    pub elements: Vec<ModMatrix>,
}

/// Base-`p` digits of `index`, most significant first, as a `d × d` matrix.
fn digits(index: u64, p: u64, d: usize) -> Vec<i64> {
    let mut out = vec![0i64; d * d];
    let mut r = index;
    for slot in out.iter_mut().rev() {
        *slot = (r % p) as i64;
        r /= p;
    }
    out
}

fn lift(d: usize, modulus: u64, q: u64, a: &[i64]) -> ModMatrix {
    let e = (0..d * d)
        .map(|k| a[k] * q as i64 + (k % (d + 1) == 0) as i64)
        .collect();
    ModMatrix::new(d, modulus, e).expect("shape is d × d")
}

/// Materializes the layer by running over `A ∈ M_d(Z/p)` and filtering by
/// determinant (`= 1` for SL, a unit for GL).
pub fn reduction_kernel(d: usize, p: u64, a: u32, variant: Variant) -> Result<CongruenceLayer, CongruenceError> {
    check_args(d, p)?;
    if a < 2 {
        return Err(CongruenceError::LevelTooSmall(a));
    }
    let count = checked_pow(p, (d * d) as u64, "layer candidates", LAYER_CAP)?;
    let modulus = checked_pow(p, a as u64, "modulus", u32::MAX as u64)?;
    let q = modulus / p;
    let mut elements = Vec::new();
    for i in 0..count {
        let x = lift(d, modulus, q, &digits(i, p, d));
        let keep = match variant {
            Variant::Sl => x.determinant() == 1,
            Variant::Gl => x.is_invertible(),
        };
        if keep {
            elements.push(x);
        }
    }
    Ok(CongruenceLayer {
        d,
        p,
        a,
        variant,
        elements,
    })
}

impl CongruenceLayer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.a)
    }

    /// `p^{d²}` for GL, `p^{d²-1}` for SL.
    pub fn expected_order(&self) -> BigUint {
        let e = self.d * self.d - (self.variant == Variant::Sl) as usize;
        BigUint::from(self.p).pow(e as u32)
    }

    /// Generators `I + p^{a-1} B` for `B` running over a basis of the target
    /// module: off-diagonal `E_ij`, and `E_ii` (GL) or `E_ii - E_dd` (SL).
    pub fn generators(&self) -> Vec<ModMatrix> {
        let (d, m) = (self.d, self.modulus());
        let q = (m / self.p) as i64;
        let mut gens = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    gens.push(ModMatrix::elementary(d, m, i, j, q));
                }
            }
        }
        match self.variant {
            Variant::Gl => {
                for i in 0..d {
                    gens.push(ModMatrix::elementary(d, m, i, i, q));
                }
            }
            Variant::Sl => {
                for i in 0..d.saturating_sub(1) {
                    let x = ModMatrix::elementary(d, m, i, i, q);
                    gens.push(x.mul(&ModMatrix::elementary(d, m, d - 1, d - 1, -q)));
                }
            }
        }
        gens
    }

    pub fn matrix_group(&self) -> MatrixGroup {
        MatrixGroup::new(self.d, self.modulus(), self.generators()).expect("layer generators are invertible")
    }

    /// `(x - I) / p^{a-1}` with entries in `Z/p`.
    pub fn additive_image(&self, x: &ModMatrix) -> Vec<u64> {
        let q = self.modulus() / self.p;
        let m = self.modulus();
        let d = self.d;
        (0..d * d)
            .map(|k| {
                let (i, j) = (k / d, k % d);
                let v = (x.get(i, j) + m - (i == j) as u64) % m;
                debug_assert_eq!(v % q, 0, "not congruent to I");
                v / q
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub d: usize,
    pub p: u64,
    pub a: u32,
    pub variant: Variant,
    pub order: String,
    pub expected_order: String,
    pub exponent: u64,
    pub abelian: bool,
    pub elementary_abelian: bool,
    /// `x ↦ (x - I)/p^{a-1}` is a bijection onto `M_d(Z/p)` (GL) or its
    /// trace-zero part (SL).
    pub additive_bijection: bool,
    /// The same map turns products into sums.
    pub additive_homomorphism: bool,
}

/// Layers up to this order are checked on all pairs, larger ones against the
/// generators only.
const PAIRWISE_LIMIT: usize = 1 << 10;

fn element_order(x: &ModMatrix, bound: u64) -> u64 {
    let mut y = x.clone();
    let mut k = 1;
    while !y.is_identity() && k <= bound {
        y = y.mul(x);
        k += 1;
    }
    k
}

pub fn layer_structure(layer: &CongruenceLayer) -> LayerReport {
    let p = layer.p;
    let d = layer.d;
    let add = |u: &[u64], v: &[u64]| -> Vec<u64> { u.iter().zip(v).map(|(a, b)| (a + b) % p).collect() };
    let images: Vec<Vec<u64>> = layer.elements.iter().map(|x| layer.additive_image(x)).collect();
    let distinct: HashSet<&Vec<u64>> = images.iter().collect();
    let in_target = |v: &Vec<u64>| match layer.variant {
        Variant::Gl => true,
        Variant::Sl => (0..d).map(|i| v[i * d + i]).sum::<u64>() % p == 0,
    };
    let target_size = layer.expected_order();
    let additive_bijection = distinct.len() == layer.order()
        && images.iter().all(in_target)
        && BigUint::from(layer.order()) == target_size;

    let gens = layer.generators();
    let others: Vec<ModMatrix> = if layer.order() <= PAIRWISE_LIMIT {
        layer.elements.clone()
    } else {
        gens.clone()
    };
    let mut hom = true;
    let mut abelian = true;
    for x in &layer.elements {
        let fx = layer.additive_image(x);
        for y in &others {
            let xy = x.mul(y);
            hom &= layer.additive_image(&xy) == add(&fx, &layer.additive_image(y));
            abelian &= xy == y.mul(x);
        }
    }
    let exponent = layer
        .elements
        .iter()
        .map(|x| element_order(x, p))
        .max()
        .unwrap_or(1);
    let p_power = biguint_is_power_of(&BigUint::from(layer.order()), p);
    LayerReport {
        d,
        p,
        a: layer.a,
        variant: layer.variant,
        order: layer.order().to_string(),
        expected_order: target_size.to_string(),
        exponent,
        abelian,
        elementary_abelian: abelian && p_power && exponent <= p,
        additive_bijection,
        additive_homomorphism: hom,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub d: usize,
    pub p: u64,
    pub a: u32,
    pub scanned: u64,
    pub all_invertible: bool,
}

/// Every `x ≡ I mod p` over `Z/p^a` has a unit determinant.
pub fn claim_one_scan(d: usize, p: u64, a: u32) -> Result<ScanReport, CongruenceError> {
    check_args(d, p)?;
    let modulus = checked_pow(p, a as u64, "modulus", u32::MAX as u64)?;
    let per_entry = modulus / p;
    let count = checked_pow(per_entry.max(1), (d * d) as u64, "scan", LAYER_CAP)?;
    let mut all = true;
    for i in 0..count {
        let a_entries = digits(i, per_entry.max(1), d);
        let x = lift(d, modulus, p, &a_entries);
        all &= x.determinant() % p != 0;
    }
    Ok(ScanReport {
        d,
        p,
        a,
        scanned: count,
        all_invertible: all,
    })
}

/// Integer matrices in the principal congruence subgroup `Γ_d(p)` of
/// `SL_d(Z)`, row-major: `I + p E_ij` for `i ≠ j`, the block
/// `[[1+p, p], [-p, 1-p]]` on each pair of consecutive coordinates, and `-I`
/// when `p = 2` and `d` is even.
pub fn principal_congruence_generators(d: usize, p: u64) -> Vec<Vec<i64>> {
    let p = p as i64;
    let id = |k: usize| (k % (d + 1) == 0) as i64;
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut e: Vec<i64> = (0..d * d).map(id).collect();
                e[i * d + j] = p;
                gens.push(e);
            }
        }
    }
    for i in 0..d.saturating_sub(1) {
        let mut e: Vec<i64> = (0..d * d).map(id).collect();
        e[i * d + i] = 1 + p;
        e[i * d + i + 1] = p;
        e[(i + 1) * d + i] = -p;
        e[(i + 1) * d + i + 1] = 1 - p;
        gens.push(e);
    }
    if p == 2 && d % 2 == 0 {
        gens.push((0..d * d).map(|k| -id(k)).collect());
    }
    gens
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualTowerReport {
    pub d: usize,
    pub p: u64,
    /// `a` for each stage `K_1/K_a`.
    pub levels: Vec<u32>,
    pub orders: Vec<String>,
    pub expected_orders: Vec<String>,
    pub p_groups: Vec<bool>,
    /// `|K_{a-1}/K_a|`, from consecutive stage orders.
    pub layer_orders: Vec<String>,
    /// Layer structure checks of the same layers, enumerated directly.
    pub elementary_abelian: Vec<bool>,
    pub connecting_onto: bool,
}

impl ResidualTowerReport {
    pub fn passed(&self) -> bool {
        self.orders == self.expected_orders
            && self.p_groups.iter().all(|&b| b)
            && self.elementary_abelian.iter().all(|&b| b)
            && self.connecting_onto
    }
}

/// Stages `K_1/K_a ⊂ SL_d(Z/p^a)`, `a = 2..=max_a`, as images of
/// [`principal_congruence_generators`] acting on `(Z/p^a)^d`.
pub fn residual_p_tower(
    d: usize,
    p: u64,
    max_a: u32,
) -> Result<(ResidualTowerReport, QuotientTower), CongruenceError> {
    check_args(d, p)?;
    if max_a < 2 {
        return Err(CongruenceError::LevelTooSmall(max_a));
    }
    let ints = principal_congruence_generators(d, p);
    let names: Vec<String> = (0..ints.len()).map(|i| format!("g{}", i + 1)).collect();
    let mut stages = Vec::new();
    let mut levels = Vec::new();
    let mut elementary = Vec::new();
    for a in 2..=max_a {
        let modulus = checked_pow(p, a as u64, "modulus", u32::MAX as u64)?;
        let degree = checked_pow(p, a as u64 * d as u64, "permutation degree", TOWER_DEGREE_CAP)?;
        let mats: Vec<ModMatrix> = ints
            .iter()
            .map(|e| ModMatrix::new(d, modulus, e.clone()))
            .collect::<Result<_, _>>()?;
        let group = MatrixGroup::new(d, modulus, mats.clone())?;
        let images: Vec<Permutation> = mats.iter().map(|m| group.permutation_of(m)).collect();
        stages.push((format!("K1/K{a} mod {p}^{a}"), degree as usize, images));
        levels.push(a);
        elementary.push(layer_structure(&reduction_kernel(d, p, a, Variant::Sl)?).elementary_abelian);
    }
    let tower = QuotientTower::new(&format!("Gamma_{d}({p})"), names, stages)?;
    let orders = tower.stage_orders();
    let expected: Vec<BigUint> = levels
        .iter()
        .map(|&a| BigUint::from(p).pow(((d * d - 1) * (a as usize - 1)) as u32))
        .collect();
    let mut layer_orders = vec![orders[0].to_string()];
    for w in orders.windows(2) {
        layer_orders.push((&w[1] / &w[0]).to_string());
    }
    // Connecting maps are homomorphisms by validation; onto since the image
    // contains every generator image of the smaller stage.
    let connecting_onto = (0..tower.depth().saturating_sub(1)).all(|i| tower.connecting(i).is_surjective());
    let report = ResidualTowerReport {
        d,
        p,
        levels,
        p_groups: orders.iter().map(|o| biguint_is_power_of(o, p)).collect(),
        orders: orders.iter().map(|o| o.to_string()).collect(),
        expected_orders: expected.iter().map(|o| o.to_string()).collect(),
        layer_orders,
        elementary_abelian: elementary,
        connecting_onto,
    };
    Ok((report, tower))
}
