use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::episode::{run_episode, ArrivalSampler, EpisodeOutcome, SimConfig};
use super::seed::episode_rng;
use crate::instance::Graph;
use crate::policies::Policy;

/// Running sums over episodes.
///
/// Counts are integers, so merging is exact and associative. Profits are kept
/// per episode index and summed pairwise in index order at the end. Together
/// this makes the final [`Estimates`] independent of how episodes were split
/// across threads or in which order partial tallies were merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    horizon: u32,
    profits: Vec<(u64, f64)>,
    request_sum: Vec<u64>,
    request_sq: Vec<u64>,
    edge_sum: Vec<u64>,
    edge_sq: Vec<u64>,
    /// `(T + 1)` bins per driver: episodes with `unavailable_from == k`.
    unavailable_hist: Vec<u64>,
}

impl Tally {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.num_requests();
        let e = graph.num_edges();
        let horizon = graph.horizon();
        Self {
            horizon,
            profits: Vec::new(),
            request_sum: vec![0; n],
            request_sq: vec![0; n],
            edge_sum: vec![0; e],
            edge_sq: vec![0; e],
            unavailable_hist: vec![0; graph.num_drivers() * (horizon as usize + 1)],
        }
    }

    pub fn iterations(&self) -> u64 {
        self.profits.len() as u64
    }

    pub fn record(&mut self, index: u64, outcome: &EpisodeOutcome) {
        self.profits.push((index, outcome.total_profit));
        for (v, &c) in outcome.request_matches.iter().enumerate() {
            self.request_sum[v] += c as u64;
            self.request_sq[v] += (c as u64) * (c as u64);
        }
        for (f, &c) in outcome.successful_assignments.iter().enumerate() {
            self.edge_sum[f] += c as u64;
            self.edge_sq[f] += (c as u64) * (c as u64);
        }
        let bins = self.horizon as usize + 1;
        for (u, &k) in outcome.unavailable_from.iter().enumerate() {
            self.unavailable_hist[u * bins + k as usize] += 1;
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.profits.extend(other.profits);
        for (a, b) in [
            (&mut self.request_sum, &other.request_sum),
            (&mut self.request_sq, &other.request_sq),
            (&mut self.edge_sum, &other.edge_sum),
            (&mut self.edge_sq, &other.edge_sq),
            (&mut self.unavailable_hist, &other.unavailable_hist),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn finish(mut self, graph: &Graph) -> Estimates {
        self.profits.sort_unstable_by_key(|p| p.0);
        let n = self.profits.len() as u64;
        let nf = n as f64;
        let profits: Vec<f64> = self.profits.iter().map(|p| p.1).collect();
        let mean_profit = if n == 0 {
            0.0
        } else {
            pairwise_sum(&profits) / nf
        };
        let profit_se = if n < 2 {
            0.0
        } else {
            let dev: Vec<f64> = profits
                .iter()
                .map(|p| (p - mean_profit) * (p - mean_profit))
                .collect();
            libm::sqrt(pairwise_sum(&dev) / (nf - 1.0) / nf)
        };

        let mut request_rate = Vec::with_capacity(graph.num_requests());
        let mut request_rate_se = Vec::with_capacity(graph.num_requests());
        for v in 0..graph.num_requests() {
            let (mean, se) = count_mean_se(self.request_sum[v], self.request_sq[v], n);
            request_rate.push(mean / graph.rate(v));
            request_rate_se.push(se / graph.rate(v));
        }
        let fairness_request =
            request_rate
                .iter()
                .enumerate()
                .fold(None, |best: Option<usize>, (v, &r)| match best {
                    Some(b) if request_rate[b] <= r => Some(b),
                    _ => Some(v),
                });
        let (fairness, fairness_se) = match fairness_request {
            Some(v) => (request_rate[v], request_rate_se[v]),
            None => (0.0, 0.0),
        };

        let (edge_assignments, edge_assignments_se) = self
            .edge_sum
            .iter()
            .zip(&self.edge_sq)
            .map(|(&s, &q)| count_mean_se(s, q, n))
            .unzip();

        let bins = self.horizon as usize + 1;
        let horizon = self.horizon as usize;
        let mut availability = vec![0.0; graph.num_drivers() * horizon];
        for u in 0..graph.num_drivers() {
            // available at round t iff unavailable_from > t
            let hist = &self.unavailable_hist[u * bins..(u + 1) * bins];
            let mut tail: u64 = 0;
            for t in (0..horizon).rev() {
                tail += hist[t + 1];
                availability[u * horizon + t] = if n == 0 { 0.0 } else { tail as f64 / nf };
            }
        }

        Estimates {
            iterations: n,
            mean_profit,
            profit_se,
            request_rate,
            request_rate_se,
            fairness,
            fairness_se,
            fairness_request,
            edge_assignments,
            edge_assignments_se,
            horizon: self.horizon,
            availability,
        }
    }
}

fn count_mean_se(sum: u64, sq: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let nf = n as f64;
    let mean = sum as f64 / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    // Σ(c - mean)² = Σc² - (Σc)²/n, evaluated exactly in integers as
    // (n·Σc² - (Σc)²) / n.
    let num = (n as u128) * (sq as u128) - (sum as u128) * (sum as u128);
    let var = num as f64 / nf / (nf - 1.0);
    (mean, libm::sqrt(var / nf))
}

/// Fixed-shape pairwise summation: the result depends only on the slice
/// contents and order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Monte Carlo aggregate of a policy's performance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub iterations: u64,
    pub mean_profit: f64,
    pub profit_se: f64,
    /// `E[|M_v|] / r_v` per request type.
    pub request_rate: Vec<f64>,
    pub request_rate_se: Vec<f64>,
    /// `min_v E[|M_v|] / r_v`.
    pub fairness: f64,
    /// Standard error of the minimizing request type's rate.
    pub fairness_se: f64,
    pub fairness_request: Option<usize>,
    /// Mean successful assignments per edge (the `κ_f` estimate).
    pub edge_assignments: Vec<f64>,
    pub edge_assignments_se: Vec<f64>,
    pub horizon: u32,
    /// Row-major `m × T` empirical availability frequencies.
    pub availability: Vec<f64>,
}

impl Estimates {
    /// Empirical probability that `driver` is available at the start of the
    /// 0-based round `round`.
    pub fn availability(&self, driver: usize, round: u32) -> f64 {
        self.availability[driver * self.horizon as usize + round as usize]
    }

    /// Binomial standard error of [`Estimates::availability`].
    pub fn availability_se(&self, driver: usize, round: u32) -> f64 {
        let p = self.availability(driver, round);
        libm::sqrt(p * (1.0 - p) / self.iterations.max(1) as f64)
    }
}

/// The episode for iteration `index` of a run seeded with `base_seed`.
pub fn run_iteration(
    graph: &Graph,
    policy: &Policy,
    arrivals: &ArrivalSampler,
    config: SimConfig,
    base_seed: u64,
    index: u64,
) -> EpisodeOutcome {
    let mut rng = episode_rng(base_seed, index);
    run_episode(graph, policy, arrivals, config, &mut rng)
}

/// Tally of iterations `range` of a run; the building block for sequential
/// and parallel drivers.
pub fn tally_range(
    graph: &Graph,
    policy: &Policy,
    config: SimConfig,
    base_seed: u64,
    range: core::ops::Range<u64>,
) -> Tally {
    let arrivals = ArrivalSampler::new(graph);
    let mut tally = Tally::new(graph);
    for i in range {
        let outcome = run_iteration(graph, policy, &arrivals, config, base_seed, i);
        tally.record(i, &outcome);
    }
    tally
}

/// Runs `iterations` independent episodes and aggregates them.
pub fn run_monte_carlo(
    graph: &Graph,
    policy: &Policy,
    iterations: u64,
    base_seed: u64,
) -> Estimates {
    run_monte_carlo_with(graph, policy, iterations, base_seed, SimConfig::default())
}

pub fn run_monte_carlo_with(
    graph: &Graph,
    policy: &Policy,
    iterations: u64,
    base_seed: u64,
    config: SimConfig,
) -> Estimates {
    tally_range(graph, policy, config, base_seed, 0..iterations).finish(graph)
}

/// Per-instance competitive ratios; `None` where the benchmark optimum is
/// not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub profit: Option<f64>,
    pub fairness: Option<f64>,
}

pub fn competitive_ratios(est: &Estimates, opt_profit: f64, opt_fairness: f64) -> Ratios {
    Ratios {
        profit: (opt_profit > 0.0).then(|| est.mean_profit / opt_profit),
        fairness: (opt_fairness > 0.0).then(|| est.fairness / opt_fairness),
    }
}
