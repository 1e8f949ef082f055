//! Online decision rules.
//!
//! A non-adaptive policy fixes, for every request type `v`, a distribution
//! `z` over `E_v` before the online phase: on each arrival it samples one
//! edge (or rejects with the residual mass) and assigns only if that edge's
//! driver is still available. It never resamples. `NAdap(α, β)` is the member of this family
//! with `z_f = (α x*_f + β y*_f) / r_v`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::instance::Graph;
use crate::lp::{check_feasibility, REPORTING_TOLERANCE};
use crate::{Error, Result};

/// Slack allowed on `α + β ≤ 1` and on `Σ_{E_v} z_f ≤ 1`.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Assign(usize),
    Reject,
}

/// Read-only snapshot of which drivers are available at the current round.
#[derive(Debug, Clone, Copy)]
pub struct AvailabilityView<'a>(&'a [bool]);

impl<'a> AvailabilityView<'a> {
    pub fn new(available: &'a [bool]) -> Self {
        Self(available)
    }

    pub fn is_available(&self, driver: usize) -> bool {
        self.0[driver]
    }
}

/// Per-request-type sampling distribution over incident edges.
#[derive(Debug, Clone, PartialEq)]
pub struct NonAdaptiveVector {
    per_request: Vec<Vec<(usize, f64)>>,
}

impl NonAdaptiveVector {
    /// Builds `z` from one value per edge. Each `z_f` must be non-negative and
    /// the mass on every `E_v` at most 1.
    pub fn from_edge_values(graph: &Graph, z: &[f64]) -> Result<Self> {
        if z.len() != graph.num_edges() {
            return Err(Error::LengthMismatch {
                expected: graph.num_edges(),
                found: z.len(),
            });
        }
        if let Some(bad) = z.iter().find(|&&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::param(
                "z",
                alloc::format!("sampling probability {bad} is negative"),
            ));
        }
        let per_request: Vec<Vec<(usize, f64)>> = (0..graph.num_requests())
            .map(|v| graph.request_edges(v).iter().map(|&f| (f, z[f])).collect())
            .collect();
        for (v, entries) in per_request.iter().enumerate() {
            let mass: f64 = entries.iter().map(|e| e.1).sum();
            if mass > 1.0 + MASS_TOLERANCE {
                return Err(Error::param(
                    "z",
                    alloc::format!(
                        "mass {mass} on request type {} exceeds 1",
                        graph.request_id(v)
                    ),
                ));
            }
        }
        Ok(Self { per_request })
    }

    /// The always-reject vector.
    pub fn zero(graph: &Graph) -> Self {
        Self::from_edge_values(graph, &vec![0.0; graph.num_edges()]).expect("zero vector is valid")
    }

    /// `z_f = 1 / |E_v|`: the Uniform baseline viewed as a non-adaptive policy.
    pub fn uniform(graph: &Graph) -> Self {
        let per_request = (0..graph.num_requests())
            .map(|v| {
                let edges = graph.request_edges(v);
                let p = 1.0 / edges.len() as f64;
                edges.iter().map(|&f| (f, p)).collect()
            })
            .collect();
        Self { per_request }
    }

    /// `(edge, z_f)` pairs for request type `v`, in `E_v` order.
    pub fn entries(&self, v: usize) -> &[(usize, f64)] {
        &self.per_request[v]
    }

    pub fn num_requests(&self) -> usize {
        self.per_request.len()
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.per_request[v].iter().map(|e| e.1).sum()
    }

    /// Flattened back to one value per edge.
    pub fn edge_values(&self, num_edges: usize) -> Vec<f64> {
        let mut z = vec![0.0; num_edges];
        for entries in &self.per_request {
            for &(f, p) in entries {
                z[f] = p;
            }
        }
        z
    }

    /// One categorical draw over `E_v ∪ {reject}`.
    pub fn sample<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> Option<usize> {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for &(f, p) in &self.per_request[v] {
            acc += p;
            if u < acc {
                return Some(f);
            }
        }
        None
    }
}

/// `z_f = (α x*_f + β y*_f) / r_v`.
///
/// Both LP solutions must satisfy the benchmark constraints (checked at
/// [`REPORTING_TOLERANCE`]); the arrival-rate row then keeps every
/// `Σ_{E_v} z_f ≤ α + β ≤ 1`. Excess mass left by solver round-off is scaled away.
pub fn make_nadap(
    graph: &Graph,
    x_star: &[f64],
    y_star: &[f64],
    alpha: f64,
    beta: f64,
) -> Result<NonAdaptiveVector> {
    check_mix(alpha, beta)?;
    for sol in [x_star, y_star] {
        if sol.len() != graph.num_edges() {
            return Err(Error::LengthMismatch {
                expected: graph.num_edges(),
                found: sol.len(),
            });
        }
        let report = check_feasibility(graph, sol, REPORTING_TOLERANCE);
        if !report.is_valid() {
            return Err(Error::Infeasible(report));
        }
    }
    let z: Vec<f64> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(f, e)| {
            (alpha * x_star[f].max(0.0) + beta * y_star[f].max(0.0)) / graph.rate(e.request)
        })
        .collect();
    Ok(NonAdaptiveVector {
        per_request: capped(graph, &z, alpha + beta),
    })
}

fn check_mix(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::param("alpha/beta", "must be non-negative"));
    }
    if alpha + beta > 1.0 + MASS_TOLERANCE {
        return Err(Error::param(
            "alpha/beta",
            alloc::format!("alpha + beta = {} exceeds 1", alpha + beta),
        ));
    }
    Ok(())
}

/// Groups `z` by request type, scaling any `E_v` whose mass exceeds `cap`
/// (only possible through LP round-off) back to `cap`.
fn capped(graph: &Graph, z: &[f64], cap: f64) -> Vec<Vec<(usize, f64)>> {
    let cap = cap.min(1.0);
    (0..graph.num_requests())
        .map(|v| {
            let edges = graph.request_edges(v);
            let mass: f64 = edges.iter().map(|&f| z[f]).sum();
            let scale = if mass > cap { cap / mass } else { 1.0 };
            edges.iter().map(|&f| (f, z[f] * scale)).collect()
        })
        .collect()
}

/// Samples one edge from `z` for arrival `v`; assigns iff its driver is
/// available, otherwise rejects without resampling.
pub fn decide_nonadaptive<R: Rng + ?Sized>(
    graph: &Graph,
    z: &NonAdaptiveVector,
    v: usize,
    avail: AvailabilityView<'_>,
    rng: &mut R,
) -> Decision {
    match z.sample(v, rng) {
        Some(f) if avail.is_available(graph.edge(f).driver) => Decision::Assign(f),
        _ => Decision::Reject,
    }
}

/// Among available edges of `E_v`, the one with the highest `p_f`; ties go
/// to the lexicographically smallest driver id.
pub fn decide_greedy(graph: &Graph, v: usize, avail: AvailabilityView<'_>) -> Decision {
    let mut best: Option<usize> = None;
    for &f in graph.request_edges(v) {
        let e = graph.edge(f);
        if !avail.is_available(e.driver) {
            continue;
        }
        best = match best {
            None => Some(f),
            Some(b) => {
                let be = graph.edge(b);
                let better = e.accept_prob > be.accept_prob
                    || (e.accept_prob == be.accept_prob
                        && graph.driver_id(e.driver) < graph.driver_id(be.driver));
                Some(if better { f } else { b })
            }
        };
    }
    best.map_or(Decision::Reject, Decision::Assign)
}

/// Samples uniformly from all of `E_v` (not only the available edges) and
/// assigns iff the sampled driver is available.
pub fn decide_uniform<R: Rng + ?Sized>(
    graph: &Graph,
    v: usize,
    avail: AvailabilityView<'_>,
    rng: &mut R,
) -> Decision {
    let edges = graph.request_edges(v);
    if edges.is_empty() {
        return Decision::Reject;
    }
    let f = edges[rng.random_range(0..edges.len())];
    if avail.is_available(graph.edge(f).driver) {
        Decision::Assign(f)
    } else {
        Decision::Reject
    }
}

/// `NAdap(α, β)` as three branches: with probability `α` sample from
/// `x*/r_v`, with probability `β` from `y*/r_v`, otherwise reject. This is
/// one categorical draw followed by one edge draw, and is distributionally
/// identical to the single draw from [`NAdap::combined`].
#[derive(Debug, Clone, PartialEq)]
pub struct NAdap {
    pub alpha: f64,
    pub beta: f64,
    profit_branch: NonAdaptiveVector,
    fairness_branch: NonAdaptiveVector,
    combined: NonAdaptiveVector,
}

impl NAdap {
    pub fn new(
        graph: &Graph,
        x_star: &[f64],
        y_star: &[f64],
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        let combined = make_nadap(graph, x_star, y_star, alpha, beta)?;
        let profit_branch = make_nadap(graph, x_star, y_star, 1.0, 0.0)?;
        let fairness_branch = make_nadap(graph, x_star, y_star, 0.0, 1.0)?;
        Ok(Self {
            alpha,
            beta,
            profit_branch,
            fairness_branch,
            combined,
        })
    }

    /// The equivalent single non-adaptive vector `z`.
    pub fn combined(&self) -> &NonAdaptiveVector {
        &self.combined
    }

    pub fn decide<R: Rng + ?Sized>(
        &self,
        graph: &Graph,
        v: usize,
        avail: AvailabilityView<'_>,
        rng: &mut R,
    ) -> Decision {
        let branch: f64 = rng.random();
        let z = if branch < self.alpha {
            &self.profit_branch
        } else if branch < self.alpha + self.beta {
            &self.fairness_branch
        } else {
            return Decision::Reject;
        };
        decide_nonadaptive(graph, z, v, avail, rng)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    NAdap(NAdap),
    NonAdaptive(NonAdaptiveVector),
    Greedy,
    Uniform,
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::NAdap(_) => "nadap",
            Policy::NonAdaptive(_) => "nonadaptive",
            Policy::Greedy => "greedy",
            Policy::Uniform => "uniform",
        }
    }

    pub fn decide<R: Rng + ?Sized>(
        &self,
        graph: &Graph,
        v: usize,
        avail: AvailabilityView<'_>,
        rng: &mut R,
    ) -> Decision {
        match self {
            Policy::NAdap(p) => p.decide(graph, v, avail, rng),
            Policy::NonAdaptive(z) => decide_nonadaptive(graph, z, v, avail, rng),
            Policy::Greedy => decide_greedy(graph, v, avail),
            Policy::Uniform => decide_uniform(graph, v, avail, rng),
        }
    }

    /// The equivalent non-adaptive vector, if the policy is non-adaptive.
    /// Greedy depends on availability and has none.
    pub fn as_nonadaptive(&self, graph: &Graph) -> Option<NonAdaptiveVector> {
        match self {
            Policy::NAdap(p) => Some(p.combined.clone()),
            Policy::NonAdaptive(z) => Some(z.clone()),
            Policy::Uniform => Some(NonAdaptiveVector::uniform(graph)),
            Policy::Greedy => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{build_star_instance, Driver, Edge, Instance, RequestType};
    use crate::lp::solve_benchmarks;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_edge_graph(p: [f64; 2], ids: [&str; 2]) -> Graph {
        let inst = Instance {
            drivers: ids
                .iter()
                .map(|id| Driver {
                    id: (*id).into(),
                    quota: 1,
                    group: None,
                })
                .collect(),
            request_types: vec![RequestType {
                id: "v".into(),
                rate: 1.0,
                group: None,
            }],
            edges: (0..2)
                .map(|i| Edge {
                    driver: ids[i].into(),
                    request_type: "v".into(),
                    accept_prob: p[i],
                    profit: 1.0,
                })
                .collect(),
            horizon: 1,
        };
        Graph::new(&inst).unwrap()
    }

    #[test]
    fn nadap_profit_branch_on_star() {
        let g = Graph::new(&build_star_instance(10, 0.01, None).unwrap()).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        let z = make_nadap(&g, &b.x_star, &b.y_star, 1.0, 0.0).unwrap();
        assert!((z.entries(0)[0].1 - 1.0).abs() < 1e-9);
        for v in 1..=10 {
            assert!(z.entries(v)[0].1.abs() < 1e-9);
        }
    }

    #[test]
    fn nadap_half_half_on_star() {
        let g = Graph::new(&build_star_instance(10, 0.01, None).unwrap()).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        let z = make_nadap(&g, &b.x_star, &b.y_star, 0.5, 0.5).unwrap();
        // 0.5·1 + 0.5·(0.01/10.01), rates are 1
        let expected = 0.5 + 0.5 * (0.01 / 10.01);
        assert!((z.entries(0)[0].1 - expected).abs() < 1e-9);
    }

    #[test]
    fn nadap_zero_mix_always_rejects() {
        let g = Graph::new(&build_star_instance(3, 0.2, None).unwrap()).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        let z = make_nadap(&g, &b.x_star, &b.y_star, 0.0, 0.0).unwrap();
        assert!(z.edge_values(g.num_edges()).iter().all(|&p| p == 0.0));
        let avail = [true];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for v in 0..4 {
            assert_eq!(
                decide_nonadaptive(&g, &z, v, AvailabilityView::new(&avail), &mut rng),
                Decision::Reject
            );
        }
    }

    #[test]
    fn nadap_rejects_bad_mix_and_infeasible_input() {
        let g = Graph::new(&build_star_instance(3, 0.2, None).unwrap()).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        assert!(make_nadap(&g, &b.x_star, &b.y_star, 0.7, 0.4).is_err());
        assert!(make_nadap(&g, &b.x_star, &b.y_star, -0.1, 0.4).is_err());
        let bad = vec![2.0; g.num_edges()];
        assert!(matches!(
            make_nadap(&g, &bad, &b.y_star, 0.5, 0.5),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            make_nadap(&g, &[0.0], &b.y_star, 0.5, 0.5),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn certain_sample_respects_availability() {
        let g = two_edge_graph([1.0, 1.0], ["a", "b"]);
        let z = NonAdaptiveVector::from_edge_values(&g, &[1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(
            decide_nonadaptive(&g, &z, 0, AvailabilityView::new(&[true, true]), &mut rng),
            Decision::Assign(0)
        );
        assert_eq!(
            decide_nonadaptive(&g, &z, 0, AvailabilityView::new(&[false, true]), &mut rng),
            Decision::Reject
        );
    }

    #[test]
    fn sampling_frequencies_match_z() {
        let g = two_edge_graph([1.0, 1.0], ["a", "b"]);
        let z = NonAdaptiveVector::from_edge_values(&g, &[0.3, 0.2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mut counts = [0u32; 3];
        for _ in 0..n {
            match decide_nonadaptive(&g, &z, 0, AvailabilityView::new(&[true, true]), &mut rng) {
                Decision::Assign(f) => counts[f] += 1,
                Decision::Reject => counts[2] += 1,
            }
        }
        for (c, p) in counts.iter().zip([0.3, 0.2, 0.5]) {
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((*c as f64 / n as f64 - p).abs() < 3.0 * sigma, "{c} vs {p}");
        }
    }

    #[test]
    fn z_mass_above_one_is_rejected() {
        let g = two_edge_graph([1.0, 1.0], ["a", "b"]);
        assert!(NonAdaptiveVector::from_edge_values(&g, &[0.7, 0.4]).is_err());
        assert!(NonAdaptiveVector::from_edge_values(&g, &[-0.1, 0.4]).is_err());
    }

    #[test]
    fn greedy_picks_highest_probability() {
        let g = two_edge_graph([0.3, 0.6], ["a", "b"]);
        assert_eq!(
            decide_greedy(&g, 0, AvailabilityView::new(&[true, true])),
            Decision::Assign(1)
        );
        assert_eq!(
            decide_greedy(&g, 0, AvailabilityView::new(&[true, false])),
            Decision::Assign(0)
        );
        assert_eq!(
            decide_greedy(&g, 0, AvailabilityView::new(&[false, false])),
            Decision::Reject
        );
    }

    #[test]
    fn greedy_breaks_ties_by_driver_id() {
        let g = two_edge_graph([0.5, 0.5], ["b", "a"]);
        // Edge 1 belongs to driver "a".
        assert_eq!(
            decide_greedy(&g, 0, AvailabilityView::new(&[true, true])),
            Decision::Assign(1)
        );
    }

    #[test]
    fn uniform_single_edge_and_exhausted_driver() {
        let g = two_edge_graph([1.0, 1.0], ["a", "b"]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let assigned = (0..n)
            .filter(|_| {
                matches!(
                    decide_uniform(&g, 0, AvailabilityView::new(&[true, false]), &mut rng),
                    Decision::Assign(0)
                )
            })
            .count();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((assigned as f64 / n as f64 - 0.5).abs() < 4.0 * sigma);
    }

    #[test]
    fn uniform_rejects_on_empty_neighbourhood() {
        let inst = Instance {
            drivers: vec![Driver {
                id: "a".into(),
                quota: 1,
                group: None,
            }],
            request_types: vec![RequestType {
                id: "v".into(),
                rate: 1.0,
                group: None,
            }],
            edges: vec![],
            horizon: 1,
        };
        let g = Graph::new(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(
            decide_uniform(&g, 0, AvailabilityView::new(&[true]), &mut rng),
            Decision::Reject
        );
    }

    #[test]
    fn branch_policy_matches_combined_distribution() {
        let g = two_edge_graph([1.0, 1.0], ["a", "b"]);
        // x* puts everything on edge 0, y* splits evenly.
        let x = [1.0, 0.0];
        let y = [0.5, 0.5];
        let p = NAdap::new(&g, &x, &y, 0.6, 0.3).unwrap();
        let z = p.combined();
        assert!((z.entries(0)[0].1 - 0.75).abs() < 1e-12);
        assert!((z.entries(0)[1].1 - 0.15).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 400_000;
        let mut counts = [0u32; 3];
        for _ in 0..n {
            match p.decide(&g, 0, AvailabilityView::new(&[true, true]), &mut rng) {
                Decision::Assign(f) => counts[f] += 1,
                Decision::Reject => counts[2] += 1,
            }
        }
        for (c, q) in counts.iter().zip([0.75, 0.15, 0.10]) {
            let sigma = (q * (1.0 - q) / n as f64).sqrt();
            assert!((*c as f64 / n as f64 - q).abs() < 4.0 * sigma);
        }
    }
}
