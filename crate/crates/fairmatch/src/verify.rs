//! Benchmark validity checks on an instance plus a fixed suite of oracle
//! cross-checks on tiny problems.

use anyhow::Result;
use fairmatch_core::data::{generate_synthetic, SyntheticParams};
use fairmatch_core::instance::build_star_instance;
use fairmatch_core::lp::brute::vertex_enumeration;
use fairmatch_core::lp::{
    build_fairness_lp, build_profit_lp, check_feasibility, evaluate_fairness, evaluate_profit,
    solve_benchmarks, solve_lp, LpStatus, REPORTING_TOLERANCE,
};
use fairmatch_core::policies::{NAdap, NonAdaptiveVector, Policy};
use fairmatch_core::simulator::{
    exact_evaluate, exact_evaluate_policy, run_monte_carlo, star_curves, RemovalRule,
};
use fairmatch_core::{Driver, Edge, Graph, Instance, RequestType};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Feasibility of given profit and fairness LP solutions, and that each
/// benchmark dominates the other solution under its own objective.
pub fn check_solutions(
    graph: &Graph,
    x: &[f64],
    y: &[f64],
    opt_profit: f64,
    opt_fairness: f64,
) -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, sol) in [
        ("profit solution feasible", x),
        ("fairness solution feasible", y),
    ] {
        let report = check_feasibility(graph, sol, REPORTING_TOLERANCE);
        let detail = if report.is_valid() {
            "no violations".to_string()
        } else {
            report.to_string().trim_end().to_string()
        };
        checks.push(Check::new(name, report.is_valid(), detail));
    }
    let py = evaluate_profit(graph, y);
    checks.push(Check::new(
        "profit optimum dominates",
        opt_profit >= py - REPORTING_TOLERANCE,
        format!("OPT-P {opt_profit} vs profit of fairness solution {py}"),
    ));
    let fx = evaluate_fairness(graph, x);
    checks.push(Check::new(
        "fairness optimum dominates",
        opt_fairness >= fx - REPORTING_TOLERANCE,
        format!("OPT-F {opt_fairness} vs fairness of profit solution {fx}"),
    ));
    checks
}

pub fn verify_instance(instance: &Instance) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let graph = match Graph::new(instance) {
        Ok(g) => g,
        Err(e) => {
            report
                .checks
                .push(Check::new("instance valid", false, e.to_string()));
            return Ok(report);
        }
    };
    report.checks.push(Check::new(
        "instance valid",
        true,
        format!(
            "{} drivers, {} request types, {} edges",
            graph.num_drivers(),
            graph.num_requests(),
            graph.num_edges()
        ),
    ));
    match solve_benchmarks(&graph) {
        Ok(b) => {
            report.checks.push(Check::new(
                "benchmark LPs solved",
                true,
                format!("OPT-P {}, OPT-F {}", b.opt_profit, b.opt_fairness),
            ));
            report.checks.extend(check_solutions(
                &graph,
                &b.x_star,
                &b.y_star,
                b.opt_profit,
                b.opt_fairness,
            ));
        }
        Err(e) => report
            .checks
            .push(Check::new("benchmark LPs solved", false, e.to_string())),
    }
    report.checks.extend(oracle_suite());
    Ok(report)
}

fn uniform_fixture() -> Instance {
    Instance {
        drivers: vec![Driver {
            id: "u".into(),
            quota: 1,
            group: None,
        }],
        request_types: vec![
            RequestType {
                id: "v1".into(),
                rate: 1.0,
                group: None,
            },
            RequestType {
                id: "v2".into(),
                rate: 1.0,
                group: None,
            },
        ],
        edges: vec![
            Edge {
                driver: "u".into(),
                request_type: "v1".into(),
                accept_prob: 1.0,
                profit: 1.0,
            },
            Edge {
                driver: "u".into(),
                request_type: "v2".into(),
                accept_prob: 1.0,
                profit: 0.5,
            },
        ],
        horizon: 2,
    }
}

fn tiny_params(horizon: u32) -> SyntheticParams {
    SyntheticParams {
        num_drivers: 2,
        num_request_types: 2,
        horizon,
        edge_prob: 0.8,
        quota: 2,
        ..Default::default()
    }
}

/// Instance-independent cross-checks of the solver, the exact evaluator,
/// the simulator and the closed-form star values.
pub fn oracle_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(run_check("star benchmarks", || {
        let g = Graph::new(&build_star_instance(10, 0.01, None)?)?;
        let b = solve_benchmarks(&g)?;
        let target = 0.01 / 10.01;
        let ok = (b.opt_profit - 1.0).abs() < 1e-6 && (b.opt_fairness - target).abs() < 1e-6;
        Ok((
            ok,
            format!(
                "OPT-P {} (want 1), OPT-F {} (want {target})",
                b.opt_profit, b.opt_fairness
            ),
        ))
    }));
    checks.push(run_check("simplex vs vertex enumeration", || {
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        for seed in 0..40 {
            let g = Graph::new(&generate_synthetic(&tiny_params(4), seed)?)?;
            if g.num_edges() == 0 {
                continue;
            }
            for prob in [build_profit_lp(&g), build_fairness_lp(&g)] {
                let sol = solve_lp(&prob)?;
                let Some((brute, _)) = vertex_enumeration(&prob, 1e-9) else {
                    return Ok((false, format!("seed {seed}: enumeration found no vertex")));
                };
                if sol.status != LpStatus::Optimal {
                    return Ok((
                        false,
                        format!("seed {seed}: simplex status {:?}", sol.status),
                    ));
                }
                worst = worst.max((sol.objective_value - brute).abs());
                cases += 1;
            }
        }
        Ok((worst < 1e-7, format!("{cases} LPs, max gap {worst:e}")))
    }));
    checks.push(run_check(
        "exact evaluation of the two-round uniform example",
        || {
            let g = Graph::new(&uniform_fixture())?;
            let ex = exact_evaluate_policy(&g, &Policy::Uniform, RemovalRule::AtQuota)?;
            let ok = (ex.profit - 0.75).abs() < 1e-12 && (ex.fairness - 0.5).abs() < 1e-12;
            Ok((
                ok,
                format!(
                    "profit {}, fairness {} (want 0.75, 0.5)",
                    ex.profit, ex.fairness
                ),
            ))
        },
    ));
    checks.push(run_check("star closed form vs exact evaluation", || {
        let g = Graph::new(&build_star_instance(10, 0.01, None)?)?;
        let mut worst: f64 = 0.0;
        for &(z0, zr) in &[(1.0, 0.0), (0.2, 0.8), (0.5, 0.3)] {
            let mut values = vec![zr / 10.0; g.num_edges()];
            values[0] = z0;
            let ex = exact_evaluate(&g, &NonAdaptiveVector::from_edge_values(&g, &values)?)?;
            let c = star_curves(z0, zr, 10, 0.01, 11)?;
            worst = worst
                .max((ex.profit - c.profit).abs())
                .max((ex.fairness - c.fairness).abs());
        }
        Ok((worst < 1e-12, format!("max gap {worst:e}")))
    }));
    checks.push(run_check("Monte Carlo vs exact evaluation", || {
        let g = Graph::new(&generate_synthetic(&tiny_params(4), 3)?)?;
        let b = solve_benchmarks(&g)?;
        let policy = Policy::NAdap(NAdap::new(&g, &b.x_star, &b.y_star, 0.5, 0.5)?);
        let ex = exact_evaluate_policy(&g, &policy, RemovalRule::AtQuota)?;
        let est = run_monte_carlo(&g, &policy, 20_000, 11);
        let z = (est.mean_profit - ex.profit).abs() / est.profit_se.max(1e-12);
        Ok((
            z <= 4.0,
            format!(
                "exact {}, simulated {} ± {} ({z:.2}σ)",
                ex.profit, est.mean_profit, est.profit_se
            ),
        ))
    }));
    checks
}

fn run_check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((ok, detail)) => Check::new(name, ok, detail),
        Err(e) => Check::new(name, false, format!("error: {e:#}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_instance_passes() {
        let r = verify_instance(&build_star_instance(10, 0.01, None).unwrap()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn injected_infeasible_vector_fails() {
        let g = Graph::new(&build_star_instance(3, 0.5, None).unwrap()).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        let mut bad = b.x_star.clone();
        bad[0] = 2.0;
        let checks = check_solutions(&g, &bad, &b.y_star, b.opt_profit, b.opt_fairness);
        assert!(!checks[0].passed);
        assert!(checks[1].passed);
    }

    #[test]
    fn invalid_instance_is_reported() {
        let mut inst = uniform_fixture();
        inst.horizon = 5;
        let r = verify_instance(&inst).unwrap();
        assert!(!r.passed());
        assert_eq!(r.checks.len(), 1);
    }
}
