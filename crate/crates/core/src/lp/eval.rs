//! Objective evaluation and feasibility checks for per-edge fractional
//! solutions `x` (one entry per edge, in edge order).

use alloc::format;

use crate::instance::Graph;
use crate::validation::ValidationReport;

/// `Σ_f w_f p_f x_f`. No feasibility requirement on `x`.
pub fn evaluate_profit(graph: &Graph, x: &[f64]) -> f64 {
    assert_eq!(x.len(), graph.num_edges(), "one value per edge");
    graph
        .edges()
        .iter()
        .zip(x)
        .map(|(e, &xf)| e.profit * e.accept_prob * xf)
        .sum()
}

/// `Σ_{f ∈ E_v} p_f x_f / r_v` for one request type.
pub fn service_ratio(graph: &Graph, x: &[f64], v: usize) -> f64 {
    let served: f64 = graph
        .request_edges(v)
        .iter()
        .map(|&f| graph.edge(f).accept_prob * x[f])
        .sum();
    served / graph.rate(v)
}

/// `min_v Σ_{f ∈ E_v} p_f x_f / r_v`; a request type with no edges counts
/// as 0. An instance without request types has fairness 0.
pub fn evaluate_fairness(graph: &Graph, x: &[f64]) -> f64 {
    assert_eq!(x.len(), graph.num_edges(), "one value per edge");
    (0..graph.num_requests())
        .map(|v| service_ratio(graph, x, v))
        .reduce(f64::min)
        .unwrap_or(0.0)
}

/// Checks the benchmark constraints on `x` within `tol`: driver capacity
/// `Σ_{E_u} p_f x_f ≤ 1`, driver quota `Σ_{E_u} x_f ≤ Δ_u`, arrival rate
/// `Σ_{E_v} x_f ≤ r_v` and `x_f ≥ 0`.
pub fn check_feasibility(graph: &Graph, x: &[f64], tol: f64) -> ValidationReport {
    let mut report = ValidationReport::new();
    if x.len() != graph.num_edges() {
        report.error(
            "length",
            "",
            format!("got {} values for {} edges", x.len(), graph.num_edges()),
        );
        return report;
    }
    for u in 0..graph.num_drivers() {
        let edges = graph.driver_edges(u);
        let load: f64 = edges
            .iter()
            .map(|&f| graph.edge(f).accept_prob * x[f])
            .sum();
        if load > 1.0 + tol {
            report.error(
                "driver-capacity",
                graph.driver_id(u),
                format!("expected matches {load} exceed unit capacity"),
            );
        }
        let probes: f64 = edges.iter().map(|&f| x[f]).sum();
        let quota = graph.quota(u) as f64;
        if probes > quota + tol {
            report.error(
                "driver-quota",
                graph.driver_id(u),
                format!("expected assignments {probes} exceed quota {quota}"),
            );
        }
    }
    for v in 0..graph.num_requests() {
        let probes: f64 = graph.request_edges(v).iter().map(|&f| x[f]).sum();
        if probes > graph.rate(v) + tol {
            report.error(
                "request-rate",
                graph.request_id(v),
                format!(
                    "expected assignments {probes} exceed arrival rate {}",
                    graph.rate(v)
                ),
            );
        }
    }
    for (f, &xf) in x.iter().enumerate() {
        if !(xf >= -tol) {
            let e = graph.edge(f);
            report.error(
                "nonnegativity",
                format!(
                    "({}, {})",
                    graph.driver_id(e.driver),
                    graph.request_id(e.request)
                ),
                format!("x_f = {xf} is negative"),
            );
        }
    }
    report
}
