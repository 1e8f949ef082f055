//! Exact expected performance of a policy by exhaustive propagation of the
//! joint driver state distribution, round by round.
//!
//! This is equivalent to enumerating every arrival sequence, sampling choice
//! and acceptance outcome with its probability; branches that lead to the
//! same joint driver state are merged, which keeps small instances with
//! moderate horizons tractable. Shares no code with the simulator.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::episode::RemovalRule;
use crate::instance::Graph;
use crate::policies::{decide_greedy, AvailabilityView, Decision, NonAdaptiveVector, Policy};
use crate::{Error, Result};

/// Upper limit on `(reachable joint states) × T × (Σ_v (|E_v| + 1))`.
pub const EXACT_WORK_LIMIT: u128 = 10_000_000;

/// A driver that is matched or deactivated; its future never matters again.
const GONE: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactEvaluation {
    pub profit: f64,
    /// `min_v E[|M_v|] / r_v`.
    pub fairness: f64,
    pub request_rate: Vec<f64>,
    /// Expected successful assignments per edge (`κ_f`).
    pub edge_assignments: Vec<f64>,
    /// Row-major `m × T`: probability each driver is available at the start
    /// of each 0-based round.
    pub availability: Vec<f64>,
}

/// Exact `(profit, fairness)` and per-request rates of `NADAP(z)`.
pub fn exact_evaluate(graph: &Graph, z: &NonAdaptiveVector) -> Result<ExactEvaluation> {
    exact_evaluate_with(graph, &Rule::NonAdaptive(z), RemovalRule::AtQuota)
}

/// Exact evaluation of any [`Policy`]; Greedy is handled through its
/// deterministic choice in each joint state.
pub fn exact_evaluate_policy(
    graph: &Graph,
    policy: &Policy,
    removal: RemovalRule,
) -> Result<ExactEvaluation> {
    match policy.as_nonadaptive(graph) {
        Some(z) => exact_evaluate_with(graph, &Rule::NonAdaptive(&z), removal),
        None => exact_evaluate_with(graph, &Rule::Greedy, removal),
    }
}

enum Rule<'a> {
    NonAdaptive(&'a NonAdaptiveVector),
    Greedy,
}

fn exact_evaluate_with(
    graph: &Graph,
    rule: &Rule<'_>,
    removal: RemovalRule,
) -> Result<ExactEvaluation> {
    let m = graph.num_drivers();
    let n = graph.num_requests();
    let horizon = graph.horizon() as usize;

    // Live per-driver states are cancellation counts 0..=limit.
    let limits: Vec<u32> = (0..m)
        .map(|u| match removal {
            RemovalRule::AtQuota => graph.quota(u) - 1,
            RemovalRule::AfterQuota => graph.quota(u),
        })
        .collect();
    if limits.iter().any(|&l| l >= GONE as u32) {
        return Err(Error::param(
            "quota",
            "exact evaluation supports quotas below 255",
        ));
    }
    let states_bound = limits
        .iter()
        .fold(1u128, |acc, &l| acc.saturating_mul(l as u128 + 2));
    let branching: u128 = (0..n)
        .map(|v| graph.request_edges(v).len() as u128 + 1)
        .sum();
    let work = states_bound
        .saturating_mul(horizon as u128)
        .saturating_mul(branching.max(1));
    if work > EXACT_WORK_LIMIT {
        return Err(Error::TooLarge {
            work,
            limit: EXACT_WORK_LIMIT,
        });
    }

    let arrival: Vec<f64> = (0..n).map(|v| graph.rate(v) / horizon as f64).collect();
    let mut profit = 0.0;
    let mut matches = vec![0.0; n];
    let mut edge_assignments = vec![0.0; graph.num_edges()];
    let mut availability = vec![0.0; m * horizon];

    let mut dist: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
    dist.insert(vec![0u8; m], 1.0);
    let mut avail = vec![false; m];

    for t in 0..horizon {
        let mut next: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for (state, &q) in &dist {
            for u in 0..m {
                avail[u] = state[u] != GONE;
                if avail[u] {
                    availability[u * horizon + t] += q;
                }
            }
            for v in 0..n {
                let qv = q * arrival[v];
                if qv == 0.0 {
                    continue;
                }
                let mut idle = qv;
                let choices: Vec<(usize, f64)> = match rule {
                    Rule::NonAdaptive(z) => z
                        .entries(v)
                        .iter()
                        .copied()
                        .filter(|&(f, p)| p > 0.0 && avail[graph.edge(f).driver])
                        .collect(),
                    Rule::Greedy => match decide_greedy(graph, v, AvailabilityView::new(&avail)) {
                        Decision::Assign(f) => vec![(f, 1.0)],
                        Decision::Reject => Vec::new(),
                    },
                };
                for (f, zf) in choices {
                    let e = graph.edge(f);
                    let u = e.driver;
                    let qa = qv * zf;
                    idle -= qa;
                    edge_assignments[f] += qa;

                    let accepted = qa * e.accept_prob;
                    profit += accepted * e.profit;
                    matches[v] += accepted;
                    let mut s = state.clone();
                    s[u] = GONE;
                    *next.entry(s).or_default() += accepted;

                    let refused = qa * (1.0 - e.accept_prob);
                    if refused > 0.0 {
                        let mut s = state.clone();
                        let c = s[u] as u32 + 1;
                        s[u] = if c > limits[u] { GONE } else { c as u8 };
                        *next.entry(s).or_default() += refused;
                    }
                }
                if idle > 0.0 {
                    *next.entry(state.clone()).or_default() += idle;
                }
            }
        }
        dist = next;
    }

    let request_rate: Vec<f64> = (0..n).map(|v| matches[v] / graph.rate(v)).collect();
    let fairness = request_rate.iter().copied().reduce(f64::min).unwrap_or(0.0);
    Ok(ExactEvaluation {
        profit,
        fairness,
        request_rate,
        edge_assignments,
        availability,
    })
}
