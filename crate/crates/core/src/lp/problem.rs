use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::instance::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective·x` subject to `constraints` and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub variable_names: Vec<String>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        let variable_names = (0..objective.len()).map(|j| format!("x{j}")).collect();
        Self {
            objective,
            constraints: Vec::new(),
            variable_names,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, name: impl Into<String>, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        dot(&self.objective, values)
    }

    /// Largest violation of any constraint or of `x ≥ 0` by `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst = values.iter().fold(0.0f64, |acc, &x| acc.max(-x));
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, values);
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => libm::fabs(lhs - c.rhs),
            };
            worst = worst.max(v);
        }
        worst
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub status: LpStatus,
}

impl LpSolution {
    pub(crate) fn without_values(status: LpStatus, num_vars: usize) -> Self {
        Self {
            values: vec![0.0; num_vars],
            objective_value: 0.0,
            status,
        }
    }
}

fn edge_var_names(graph: &Graph) -> Vec<String> {
    graph
        .edges()
        .iter()
        .map(|e| {
            format!(
                "x({},{})",
                graph.driver_id(e.driver),
                graph.request_id(e.request)
            )
        })
        .collect()
}

/// Rows shared by both benchmarks, over `width` columns whose first
/// `|E|` entries are the edge variables:
/// driver capacity `Σ_{E_u} p_f x_f ≤ 1`, driver quota `Σ_{E_u} x_f ≤ Δ_u`
/// and arrival rate `Σ_{E_v} x_f ≤ r_v`.
fn push_shared_constraints(graph: &Graph, prob: &mut LpProblem, width: usize) {
    for u in 0..graph.num_drivers() {
        let mut row = vec![0.0; width];
        for &f in graph.driver_edges(u) {
            row[f] = graph.edge(f).accept_prob;
        }
        prob.add(
            format!("capacity({})", graph.driver_id(u)),
            row,
            Relation::Le,
            1.0,
        );
    }
    for u in 0..graph.num_drivers() {
        let mut row = vec![0.0; width];
        for &f in graph.driver_edges(u) {
            row[f] = 1.0;
        }
        prob.add(
            format!("quota({})", graph.driver_id(u)),
            row,
            Relation::Le,
            graph.quota(u) as f64,
        );
    }
    for v in 0..graph.num_requests() {
        let mut row = vec![0.0; width];
        for &f in graph.request_edges(v) {
            row[f] = 1.0;
        }
        prob.add(
            format!("rate({})", graph.request_id(v)),
            row,
            Relation::Le,
            graph.rate(v),
        );
    }
}

/// Profit benchmark: maximize `Σ_f w_f p_f x_f`.
pub fn build_profit_lp(graph: &Graph) -> LpProblem {
    let width = graph.num_edges();
    let objective = graph
        .edges()
        .iter()
        .map(|e| e.profit * e.accept_prob)
        .collect();
    let mut prob = LpProblem {
        objective,
        constraints: Vec::new(),
        variable_names: edge_var_names(graph),
    };
    push_shared_constraints(graph, &mut prob, width);
    prob
}

/// Fairness benchmark, linearized: maximize `η` subject to
/// `η ≤ Σ_{E_v} p_f x_f / r_v` for every request type `v`. The `η` column is
/// the last one.
pub fn build_fairness_lp(graph: &Graph) -> LpProblem {
    let edges = graph.num_edges();
    let width = edges + 1;
    let mut objective = vec![0.0; width];
    objective[edges] = 1.0;
    let mut variable_names = edge_var_names(graph);
    variable_names.push("eta".into());
    let mut prob = LpProblem {
        objective,
        constraints: Vec::new(),
        variable_names,
    };
    push_shared_constraints(graph, &mut prob, width);
    for v in 0..graph.num_requests() {
        let mut row = vec![0.0; width];
        let rate = graph.rate(v);
        for &f in graph.request_edges(v) {
            row[f] = -graph.edge(f).accept_prob / rate;
        }
        row[edges] = 1.0;
        prob.add(
            format!("min_ratio({})", graph.request_id(v)),
            row,
            Relation::Le,
            0.0,
        );
    }
    prob
}
