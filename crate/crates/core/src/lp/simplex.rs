//! Dense two-phase tableau simplex with Bland's rule.
//!
//! The entering column is the lowest-index column with a positive reduced
//! cost and ties in the ratio test go to the lowest-index basic variable, so
//! the solver never cycles and a given problem always follows the same pivot
//! path.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::problem::{LpProblem, LpSolution, LpStatus, Relation};
use crate::{Error, Result};

/// Reduced-cost, pivot and phase-one feasibility tolerance.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

const RATIO_TIE: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    /// `rows[i]` holds the constraint coefficients followed by the rhs.
    rows: Vec<Vec<f64>>,
    /// Reduced costs `c_j - c_B B⁻¹ A_j`, followed by minus the objective value.
    cost: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    iterations: usize,
    limit: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let p = self.rows[row][col];
        for a in self.rows[row].iter_mut() {
            *a /= p;
        }
        self.rows[row][col] = 1.0;
        let pivot_row = core::mem::take(&mut self.rows[row]);
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor != 0.0 {
                for (a, &b) in r.iter_mut().zip(&pivot_row) {
                    *a -= factor * b;
                }
                r[col] = 0.0;
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for (a, &b) in self.cost.iter_mut().zip(&pivot_row) {
                *a -= factor * b;
            }
            self.cost[col] = 0.0;
        }
        debug_assert_eq!(pivot_row.len(), width + 1);
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Sets the reduced-cost row for column costs `c`.
    fn price(&mut self, c: &[f64]) {
        let width = self.width();
        let mut cost = vec![0.0; width + 1];
        cost[..width].copy_from_slice(c);
        for (r, &b) in self.rows.iter().zip(&self.basis) {
            let cb = c[b];
            if cb != 0.0 {
                for (a, &x) in cost.iter_mut().zip(r) {
                    *a -= cb * x;
                }
            }
        }
        self.cost = cost;
    }

    fn run(&mut self, allowed: impl Fn(ColumnKind) -> bool) -> Result<Outcome> {
        let width = self.width();
        loop {
            let entering = (0..width)
                .find(|&j| allowed(self.kinds[j]) && self.cost[j] > FEASIBILITY_TOLERANCE);
            let Some(col) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                let a = r[col];
                if a > FEASIBILITY_TOLERANCE {
                    let ratio = r[width] / a;
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio - RATIO_TIE
                                || (ratio <= best_ratio + RATIO_TIE
                                    && self.basis[i] < self.basis[best])
                            {
                                Some((i, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(Outcome::Unbounded);
            };

            self.iterations += 1;
            if self.iterations > self.limit {
                return Err(Error::IterationLimit(self.limit));
            }
            self.pivot(row, col);
        }
    }
}

/// Solves `prob`. Returns a vertex solution when optimal; infeasible and
/// unbounded problems are reported through [`LpSolution::status`]. Exceeding
/// the iteration limit is an error, since Bland's rule cannot cycle.
pub fn solve_lp(prob: &LpProblem) -> Result<LpSolution> {
    let n = prob.num_vars();
    for (i, c) in prob.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(Error::MalformedLp(format!(
                "row {i} has {} coefficients, objective has {n}",
                c.coeffs.len()
            )));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::MalformedLp(format!(
                "row {i} has a non-finite entry"
            )));
        }
    }
    if prob.objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::MalformedLp(
            "non-finite objective coefficient".into(),
        ));
    }

    // Normalize to non-negative right-hand sides.
    let rows: Vec<(Vec<f64>, Relation, f64)> = prob
        .constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|a| -a).collect(), rel, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            }
        })
        .collect();

    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = n + slacks + artificials;
    let mut kinds = vec![ColumnKind::Structural; n];
    kinds.extend(core::iter::repeat_n(ColumnKind::Slack, slacks));
    kinds.extend(core::iter::repeat_n(ColumnKind::Artificial, artificials));

    let mut tab_rows = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut next_slack, mut next_art) = (n, n + slacks);
    for (coeffs, rel, rhs) in rows {
        let mut r = vec![0.0; width + 1];
        r[..n].copy_from_slice(&coeffs);
        r[width] = rhs;
        match rel {
            Relation::Le => {
                r[next_slack] = 1.0;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                r[next_slack] = -1.0;
                next_slack += 1;
                r[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                r[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
        }
        tab_rows.push(r);
    }

    let limit = 50_000 + 100 * (tab_rows.len() + width);
    let mut tab = Tableau {
        rows: tab_rows,
        cost: vec![0.0; width + 1],
        basis,
        kinds,
        iterations: 0,
        limit,
    };

    if artificials > 0 {
        let phase_one: Vec<f64> = tab
            .kinds
            .iter()
            .map(|&k| {
                if k == ColumnKind::Artificial {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        tab.price(&phase_one);
        tab.run(|_| true)?;
        let scale = tab
            .rows
            .iter()
            .fold(1.0f64, |m, r| m.max(libm::fabs(r[width])));
        if tab.cost[width] > FEASIBILITY_TOLERANCE * scale {
            return Ok(LpSolution::without_values(LpStatus::Infeasible, n));
        }
        drive_out_artificials(&mut tab);
    }

    let mut costs = vec![0.0; width];
    costs[..n].copy_from_slice(&prob.objective);
    tab.price(&costs);
    match tab.run(|k| k != ColumnKind::Artificial)? {
        Outcome::Unbounded => Ok(LpSolution::without_values(LpStatus::Unbounded, n)),
        Outcome::Optimal => {
            let mut values = vec![0.0; n];
            for (r, &b) in tab.rows.iter().zip(&tab.basis) {
                if b < n {
                    let x = r[width];
                    values[b] = if x < 0.0 && x > -FEASIBILITY_TOLERANCE {
                        0.0
                    } else {
                        x
                    };
                }
            }
            let objective_value = prob.objective_value(&values);
            Ok(LpSolution {
                values,
                objective_value,
                status: LpStatus::Optimal,
            })
        }
    }
}

/// Pivots zero-level artificial variables out of the basis after phase one,
/// dropping rows that turn out to be linearly dependent.
fn drive_out_artificials(tab: &mut Tableau) {
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.kinds[tab.basis[i]] != ColumnKind::Artificial {
            i += 1;
            continue;
        }
        let col = (0..tab.width()).find(|&j| {
            tab.kinds[j] != ColumnKind::Artificial
                && libm::fabs(tab.rows[i][j]) > FEASIBILITY_TOLERANCE
        });
        match col {
            Some(j) => {
                tab.pivot(i, j);
                i += 1;
            }
            None => {
                tab.rows.remove(i);
                tab.basis.remove(i);
            }
        }
    }
}
