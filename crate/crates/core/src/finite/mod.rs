//! Finite groups: permutation groups through stabilizer chains, matrix groups
//! over `Z/m` through closure, and the derived and lower central series.

pub mod chain;
pub mod group;
pub mod matrix;
pub mod perm;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

pub use chain::StabChain;
pub use group::{wreath_product, Homomorphism, PermGroup};
pub use matrix::{MatrixGroup, ModMatrix, DEFAULT_MATRIX_CAP};
pub use perm::{PermError, Permutation};

pub(crate) use group::biguint_is_power_of;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteError {
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: u128 },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("expected {expected} generator images, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("modulus {0} is not at least 2")]
    BadModulus(u64),
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix {0} is not invertible")]
    NotInvertible(String),
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A permutation group or a matrix group over `Z/m`.
#[derive(Clone, Debug)]
pub enum FiniteGroup {
    Perm(PermGroup),
    Matrix(MatrixGroup),
}

impl FiniteGroup {
    /// Exact order; matrix groups are closed breadth-first under `cap`.
    pub fn order(&self, cap: usize) -> Result<BigUint, FiniteError> {
        match self {
            FiniteGroup::Perm(g) => Ok(g.order()),
            FiniteGroup::Matrix(m) => Ok(BigUint::from(m.order(cap)?)),
        }
    }

    /// Permutation model; matrix groups act on their natural module.
    pub fn to_perm_group(&self, max_degree: usize) -> Result<PermGroup, FiniteError> {
        match self {
            FiniteGroup::Perm(g) => Ok(g.clone()),
            FiniteGroup::Matrix(m) => m.to_permutation_group(max_degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Derived => "derived",
            SeriesKind::LowerCentral => "lower central",
        })
    }
}

/// `G = G_0 ⊵ G_1 ⊵ … ⊵ G_t`; when `stabilized`, `G_{t+1} = G_t`.
#[derive(Debug, Clone)]
pub struct NormalSeries {
    pub kind: SeriesKind,
    pub groups: Vec<PermGroup>,
    pub stabilized: bool,
}

/// Hard stop for series that refuse to settle.
pub const MAX_SERIES_STEPS: usize = 256;

impl NormalSeries {
    pub fn orders(&self) -> Vec<BigUint> {
        self.groups.iter().map(PermGroup::order).collect()
    }

    pub fn terminal(&self) -> &PermGroup {
        self.groups.last().expect("series has at least one term")
    }

    /// Reaches the trivial group.
    pub fn reaches_trivial(&self) -> bool {
        self.terminal().order().is_one()
    }

    /// Number of strict steps `G_i > G_{i+1}`.
    pub fn strict_steps(&self) -> usize {
        self.groups.len() - 1
    }

    /// Derived length or nilpotency class, when the series reaches 1.
    pub fn length(&self) -> Option<usize> {
        self.reaches_trivial().then(|| self.strict_steps())
    }

    /// Term `n`, repeating the last term past the end.
    pub fn term(&self, n: usize) -> &PermGroup {
        &self.groups[n.min(self.groups.len() - 1)]
    }
}

fn series(g: &PermGroup, kind: SeriesKind) -> NormalSeries {
    let mut groups = vec![g.clone()];
    let mut stabilized = false;
    for _ in 0..MAX_SERIES_STEPS {
        let last = groups.last().unwrap();
        let next = match kind {
            SeriesKind::Derived => last.derived_subgroup(),
            SeriesKind::LowerCentral => g.commutator_subgroup(g, last),
        };
        if next.order() == last.order() {
            stabilized = true;
            break;
        }
        groups.push(next);
    }
    NormalSeries {
        kind,
        groups,
        stabilized,
    }
}

/// `D^0 = G`, `D^{n+1} = [D^n, D^n]`, until it stabilizes.
pub fn derived_series(g: &PermGroup) -> NormalSeries {
    series(g, SeriesKind::Derived)
}

/// `C^1 = G`, `C^{j+1} = [G, C^j]`, until it stabilizes.
pub fn lower_central_series(g: &PermGroup) -> NormalSeries {
    series(g, SeriesKind::LowerCentral)
}

pub fn normal_closure(g: &PermGroup, seeds: &[Permutation]) -> PermGroup {
    g.normal_closure(seeds)
}

/// Stable term of the derived series.
pub fn soluble_residual(g: &PermGroup) -> PermGroup {
    derived_series(g).terminal().clone()
}

/// Default order bound for the lattice cross-check in [`perfect_core`].
pub const DEFAULT_LATTICE_CAP: usize = 2000;

/// Largest perfect subgroup. Computed as the soluble residual and, for groups
/// of order at most `cap`, cross-checked against the join of all perfect
/// subgroups found by walking the subgroup lattice.
pub fn perfect_core(g: &PermGroup, cap: usize) -> Result<PermGroup, FiniteError> {
    if g.order() > BigUint::from(cap) {
        return Err(FiniteError::CapExceeded {
            what: "perfect core lattice check",
            cap: cap as u128,
        });
    }
    let residual = soluble_residual(g);
    let lattice = crate::oracles::perfect_core_by_lattice(g, cap)
        .ok_or(FiniteError::CapExceeded {
            what: "subgroup lattice",
            cap: cap as u128,
        })?;
    if lattice.len() as u64 != residual.order().to_u64().unwrap_or(0)
        || lattice.iter().any(|x| !residual.contains(x))
    {
        return Err(FiniteError::Inconsistent(
            "soluble residual differs from lattice perfect core".into(),
        ));
    }
    Ok(residual)
}

/// Default index bound when building quotient permutation representations.
pub const DEFAULT_QUOTIENT_INDEX: usize = 1 << 16;

/// `G / D^∞(G)` as a permutation group on cosets.
pub fn prosoluble_completion_finite(g: &PermGroup) -> Result<PermGroup, FiniteError> {
    let r = soluble_residual(g);
    if r.is_trivial() || r.order().is_one() {
        return Ok(g.clone());
    }
    Ok(g.quotient_by_normal(&r, DEFAULT_QUOTIENT_INDEX)?.0)
}

/// `|G / D^n(G)| = |Q / D^n(Q)|` with `Q = G / D^∞(G)`, for every `n` up to
/// the point where both series have stabilized.
pub fn derived_quotient_consistency(g: &PermGroup) -> Result<bool, FiniteError> {
    let q = prosoluble_completion_finite(g)?;
    let sg = derived_series(g);
    let sq = derived_series(&q);
    let (go, qo) = (g.order(), q.order());
    let steps = sg.groups.len().max(sq.groups.len()) + 1;
    Ok((0..=steps).all(|n| &go / sg.term(n).order() == &qo / sq.term(n).order()))
}

/// Derived lengths, series orders and related flags for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesSummary {
    pub order: String,
    pub derived_orders: Vec<String>,
    pub lower_central_orders: Vec<String>,
    pub is_soluble: bool,
    pub is_nilpotent: bool,
    pub derived_length: Option<usize>,
    pub nilpotency_class: Option<usize>,
    pub soluble_residual_order: String,
}

pub fn series_summary(g: &PermGroup) -> SeriesSummary {
    let d = derived_series(g);
    let l = lower_central_series(g);
    let s = |v: Vec<BigUint>| v.into_iter().map(|x| x.to_string()).collect();
    SeriesSummary {
        order: g.order().to_string(),
        derived_orders: s(d.orders()),
        lower_central_orders: s(l.orders()),
        is_soluble: d.reaches_trivial(),
        is_nilpotent: l.reaches_trivial(),
        derived_length: d.length(),
        nilpotency_class: l.length(),
        soluble_residual_order: d.terminal().order().to_string(),
    }
}

#[cfg(test)]
mod tests;
