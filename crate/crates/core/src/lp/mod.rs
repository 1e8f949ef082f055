//! The profit and fairness benchmark LPs.
//!
//! Both share the constraint set
//!
//! ```text
//! Σ_{f∈E_u} p_f x_f ≤ 1     ∀u   (unit capacity)
//! Σ_{f∈E_u} x_f     ≤ Δ_u   ∀u   (cancellation quota)
//! Σ_{f∈E_v} x_f     ≤ r_v   ∀v   (at most one assignment per arrival)
//! x_f ≥ 0
//! ```
//!
//! where `x_f` is the expected number of assignments along edge `f`. The
//! profit LP maximizes `Σ_f w_f p_f x_f`; the fairness LP maximizes `η`
//! subject to `η ≤ Σ_{f∈E_v} p_f x_f / r_v` for every `v`.

pub mod brute;
mod eval;
mod format;
mod problem;
mod simplex;

pub use eval::{check_feasibility, evaluate_fairness, evaluate_profit, service_ratio};
pub use format::write_lp_format;
pub use problem::{
    build_fairness_lp, build_profit_lp, Constraint, LpProblem, LpSolution, LpStatus, Relation,
};
pub use simplex::{solve_lp, FEASIBILITY_TOLERANCE};

use alloc::format;
use alloc::vec::Vec;

use crate::instance::Graph;
use crate::{Error, Result};

/// Tolerance at which solver output is reported feasible.
pub const REPORTING_TOLERANCE: f64 = 1e-7;

/// Optimal solutions of both benchmarks: `x*` with value OPT-P and `y*` with
/// value OPT-F. Both vectors are per edge; `η` is dropped from `y*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmarks {
    pub x_star: Vec<f64>,
    pub opt_profit: f64,
    pub y_star: Vec<f64>,
    pub opt_fairness: f64,
}

pub fn solve_profit_lp(graph: &Graph) -> Result<LpSolution> {
    expect_optimal(solve_lp(&build_profit_lp(graph))?, "profit")
}

pub fn solve_fairness_lp(graph: &Graph) -> Result<LpSolution> {
    expect_optimal(solve_lp(&build_fairness_lp(graph))?, "fairness")
}

pub fn solve_benchmarks(graph: &Graph) -> Result<Benchmarks> {
    let profit = solve_profit_lp(graph)?;
    let mut fairness = solve_fairness_lp(graph)?;
    fairness.values.truncate(graph.num_edges());
    Ok(Benchmarks {
        x_star: profit.values,
        opt_profit: profit.objective_value,
        y_star: fairness.values,
        opt_fairness: fairness.objective_value,
    })
}

// Both benchmarks contain x = 0 and are bounded by the capacity rows, so any
// other status means something went wrong numerically.
fn expect_optimal(sol: LpSolution, which: &str) -> Result<LpSolution> {
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        other => Err(Error::MalformedLp(format!(
            "{which} benchmark reported {other:?}"
        ))),
    }
}
