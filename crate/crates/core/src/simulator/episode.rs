use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::instance::Graph;
use crate::policies::{AvailabilityView, Decision, Policy};

/// When a driver stops receiving assignments after cancelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RemovalRule {
    /// Removed once cancellations reach `Δ_u`, so a driver receives at most
    /// `Δ_u` assignments. This is the discipline the availability analysis
    /// assumes.
    #[default]
    AtQuota,
    /// Removed only after cancelling more than `Δ_u` requests.
    AfterQuota,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimConfig {
    pub removal: RemovalRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DriverState {
    /// Unit capacity consumed by an accepted assignment.
    pub matched: bool,
    pub assignments_received: u32,
    pub cancellations: u32,
}

impl DriverState {
    pub fn is_available(&self, quota: u32, rule: RemovalRule) -> bool {
        !self.matched
            && match rule {
                RemovalRule::AtQuota => self.cancellations < quota,
                RemovalRule::AfterQuota => self.cancellations <= quota,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Match {
    pub edge: usize,
    /// 0-based round index.
    pub round: u32,
}

/// One simulated horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    /// The matching `M`: accepted assignments in round order.
    pub matches: Vec<Match>,
    /// `|M_v|` per request type.
    pub request_matches: Vec<u32>,
    /// Assignments made to an available driver, per edge, accepted or not.
    pub successful_assignments: Vec<u32>,
    /// Per driver, the first 0-based round at whose start the driver was
    /// unavailable (`T` if available throughout). Availability never
    /// returns, so this encodes every per-round availability bit.
    pub unavailable_from: Vec<u32>,
    pub drivers: Vec<DriverState>,
    pub total_profit: f64,
}

impl EpisodeOutcome {
    pub fn available_at(&self, driver: usize, round: u32) -> bool {
        round < self.unavailable_from[driver]
    }

    /// `min_v |M_v| / r_v` for this single episode.
    pub fn fairness(&self, graph: &Graph) -> f64 {
        self.request_matches
            .iter()
            .enumerate()
            .map(|(v, &c)| c as f64 / graph.rate(v))
            .reduce(f64::min)
            .unwrap_or(0.0)
    }
}

/// Draws request types with probability `r_v / T`.
#[derive(Debug, Clone)]
pub struct ArrivalSampler {
    cumulative: Vec<f64>,
}

impl ArrivalSampler {
    pub fn new(graph: &Graph) -> Self {
        let t = graph.horizon() as f64;
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = (0..graph.num_requests())
            .map(|v| {
                acc += graph.rate(v) / t;
                acc
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self { cumulative }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Runs `T` rounds of KIID arrivals under `policy`.
///
/// Each round draws a request type, asks the policy for a decision given the
/// current availability, and on assignment flips the edge's acceptance coin:
/// acceptance consumes the driver, refusal counts a cancellation. The
/// outcome is a deterministic function of the graph, policy and `rng` state.
pub fn run_episode<R: Rng + ?Sized>(
    graph: &Graph,
    policy: &Policy,
    arrivals: &ArrivalSampler,
    config: SimConfig,
    rng: &mut R,
) -> EpisodeOutcome {
    let horizon = graph.horizon();
    let m = graph.num_drivers();
    let mut drivers = vec![DriverState::default(); m];
    let mut available: Vec<bool> = (0..m)
        .map(|u| drivers[u].is_available(graph.quota(u), config.removal))
        .collect();
    let mut unavailable_from: Vec<u32> = available
        .iter()
        .map(|&a| if a { horizon } else { 0 })
        .collect();
    let mut request_matches = vec![0u32; graph.num_requests()];
    let mut successful_assignments = vec![0u32; graph.num_edges()];
    let mut matches = Vec::new();
    let mut total_profit = 0.0;

    if graph.num_requests() == 0 {
        return EpisodeOutcome {
            matches,
            request_matches,
            successful_assignments,
            unavailable_from,
            drivers,
            total_profit,
        };
    }

    for round in 0..horizon {
        let v = arrivals.sample(rng);
        let Decision::Assign(f) = policy.decide(graph, v, AvailabilityView::new(&available), rng)
        else {
            continue;
        };
        let edge = graph.edge(f);
        let u = edge.driver;
        debug_assert_eq!(edge.request, v, "policy assigned a non-incident edge");
        if !available[u] {
            continue;
        }
        let state = &mut drivers[u];
        state.assignments_received += 1;
        successful_assignments[f] += 1;
        if rng.random::<f64>() < edge.accept_prob {
            state.matched = true;
            request_matches[v] += 1;
            total_profit += edge.profit;
            matches.push(Match { edge: f, round });
        } else {
            state.cancellations += 1;
        }
        if !state.is_available(graph.quota(u), config.removal) {
            available[u] = false;
            unavailable_from[u] = round + 1;
        }
    }

    EpisodeOutcome {
        matches,
        request_matches,
        successful_assignments,
        unavailable_from,
        drivers,
        total_profit,
    }
}
