//! Side-by-side view of the derived-series tower and the `p`-adic towers of a
//! group, at finite truncation.

use num_bigint::BigUint;
use serde::Serialize;

use super::{abelian_p_tower, TowerError};
use crate::certify::{KernelVerdict, VerdictStatus};
use crate::finite::{derived_series, PermGroup};
use crate::words::Presentation;
use crate::zlattice::abelianize;

pub enum ComparisonSubject<'a> {
    Presented {
        name: &'a str,
        presentation: &'a Presentation,
        verdict: Option<&'a KernelVerdict>,
    },
    Finite {
        name: &'a str,
        group: &'a PermGroup,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct PTowerSummary {
    pub p: u64,
    pub stage_orders: Vec<String>,
    /// Every stage is strictly larger than the previous one.
    pub strictly_refining: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub group: String,
    /// Orders (or structure) of the known quotients `Γ/D^n`, `n = 1, 2, …`.
    pub derived_stages: Vec<String>,
    /// `Some(true)` when the derived tower is known to stop growing.
    pub derived_tower_stabilizes: Option<bool>,
    pub prosoluble_completion: Option<String>,
    pub p_towers: Vec<PTowerSummary>,
    /// The true prosoluble completion is a proper dense image of the
    /// profinite-soluble one (the latter keeps growing along some `p`-tower
    /// while the former has stopped at an infinite stage).
    pub differs_from_finite_soluble: Option<bool>,
    pub summary: String,
}

fn p_summary(orders: Vec<BigUint>, p: u64) -> PTowerSummary {
    PTowerSummary {
        p,
        strictly_refining: orders.windows(2).all(|w| w[0] < w[1]),
        stage_orders: orders.iter().map(|o| o.to_string()).collect(),
    }
}

pub fn completion_comparison(
    subject: ComparisonSubject<'_>,
    primes: &[u64],
    max_stage: u32,
) -> Result<ComparisonReport, TowerError> {
    match subject {
        ComparisonSubject::Finite { name, group } => {
            let s = derived_series(group);
            let total = group.order();
            let stages: Vec<String> = s.groups[1..]
                .iter()
                .chain(std::iter::once(s.terminal()))
                .map(|h| (&total / h.order()).to_string())
                .collect();
            let residual = s.terminal().order();
            let completion = &total / &residual;
            Ok(ComparisonReport {
                group: name.to_string(),
                derived_stages: stages,
                derived_tower_stabilizes: Some(true),
                prosoluble_completion: Some(format!("finite of order {completion}")),
                p_towers: Vec::new(),
                differs_from_finite_soluble: Some(false),
                summary: if s.reaches_trivial() {
                    format!("soluble of order {total}: every tower stops at the group itself")
                } else {
                    format!(
                        "soluble residual of order {residual}: towers stop at the quotient of order {completion}"
                    )
                },
            })
        }
        ComparisonSubject::Presented {
            name,
            presentation,
            verdict,
        } => {
            let ab = abelianize(presentation);
            let mut p_towers = Vec::new();
            for &p in primes {
                let t = abelian_p_tower(presentation, p, max_stage)?;
                p_towers.push(p_summary(t.stage_orders(), p));
            }
            let status = verdict.map(|v| &v.status);
            let (stages, stabilizes, completion) = match status {
                Some(VerdictStatus::Perfect) => (vec!["1".to_string()], Some(true), Some("1".to_string())),
                Some(VerdictStatus::KernelContains { .. }) | Some(VerdictStatus::Soluble { length: 1 }) => (
                    vec![ab.invariants.to_string()],
                    Some(true),
                    Some(ab.invariants.to_string()),
                ),
                Some(VerdictStatus::ResiduallySolubleEvidence) => {
                    (vec![ab.invariants.to_string(), "free metabelian".into()], Some(false), None)
                }
                _ => (vec![ab.invariants.to_string()], None, None),
            };
            let infinite_stage = ab.invariants.free_rank > 0;
            let growing = p_towers.iter().any(|t| t.strictly_refining);
            let differs = match stabilizes {
                Some(true) => Some(infinite_stage && growing),
                _ => None,
            };
            let summary = match (&completion, differs) {
                (Some(c), Some(true)) => format!(
                    "true prosoluble completion is {c} at every stage, while the p-towers keep refining"
                ),
                (Some(c), _) if c == "1" => "true prosoluble completion is reduced to one element".into(),
                (Some(c), _) => format!("true prosoluble completion is {c}"),
                (None, _) => "derived tower not determined by the available data".into(),
            };
            Ok(ComparisonReport {
                group: name.to_string(),
                derived_stages: stages,
                derived_tower_stabilizes: stabilizes,
                prosoluble_completion: completion,
                p_towers,
                differs_from_finite_soluble: differs,
                summary,
            })
        }
    }
}
