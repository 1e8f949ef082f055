//! Brute-force reference solver for tiny LPs.
//!
//! Enumerates every choice of `n` tight rows (constraints plus `x_j ≥ 0`),
//! solves the square system by Gaussian elimination and keeps the best
//! feasible point. It shares no code with the simplex and is used to
//! cross-check it. Only meaningful for bounded problems, where an optimal
//! vertex exists whenever the feasible set is nonempty.

use alloc::vec;
use alloc::vec::Vec;

use super::problem::{dot, LpProblem, Relation};

/// Best vertex `(value, point)`, or `None` when no vertex is feasible
/// within `tol`.
pub fn vertex_enumeration(prob: &LpProblem, tol: f64) -> Option<(f64, Vec<f64>)> {
    let n = prob.num_vars();
    if n == 0 {
        return if prob
            .constraints
            .iter()
            .all(|c| satisfied(c.relation, 0.0, c.rhs, tol))
        {
            Some((0.0, Vec::new()))
        } else {
            None
        };
    }

    // All rows as (coeffs, rhs); bounds x_j ≥ 0 appended as unit rows.
    let mut rows: Vec<(Vec<f64>, f64, bool)> = prob
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs, c.relation == Relation::Eq))
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e, 0.0, false));
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    if n > rows.len() {
        return None;
    }
    loop {
        if let Some(x) = solve_square(&rows, &subset) {
            if feasible(prob, &x, tol) {
                let value = dot(&prob.objective, &x);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, x));
                }
            }
        }
        if !next_combination(&mut subset, rows.len()) {
            break;
        }
    }
    best
}

fn satisfied(rel: Relation, lhs: f64, rhs: f64, tol: f64) -> bool {
    match rel {
        Relation::Le => lhs <= rhs + tol,
        Relation::Ge => lhs >= rhs - tol,
        Relation::Eq => libm::fabs(lhs - rhs) <= tol,
    }
}

fn feasible(prob: &LpProblem, x: &[f64], tol: f64) -> bool {
    x.iter().all(|&v| v >= -tol)
        && prob
            .constraints
            .iter()
            .all(|c| satisfied(c.relation, dot(&c.coeffs, x), c.rhs, tol))
}

/// Lexicographic successor of a k-subset of `0..m`.
fn next_combination(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < m - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(rows: &[(Vec<f64>, f64, bool)], pick: &[usize]) -> Option<Vec<f64>> {
    let n = pick.len();
    let mut a: Vec<Vec<f64>> = pick
        .iter()
        .map(|&i| {
            let mut r = rows[i].0.clone();
            r.push(rows[i].1);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            libm::fabs(a[i][col])
                .partial_cmp(&libm::fabs(a[j][col]))
                .unwrap()
        })?;
        if libm::fabs(a[piv][col]) < 1e-11 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    #[allow(clippy::needless_range_loop)]
                    for c in col..=n {
                        a[r][c] -= factor * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_textbook_optimum() {
        let mut p = LpProblem::new(vec![3.0, 5.0]);
        p.add("a", vec![1.0, 0.0], Relation::Le, 4.0);
        p.add("b", vec![0.0, 2.0], Relation::Le, 12.0);
        p.add("c", vec![3.0, 2.0], Relation::Le, 18.0);
        let (v, x) = vertex_enumeration(&p, 1e-9).unwrap();
        assert!((v - 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_has_no_vertex() {
        let mut p = LpProblem::new(vec![1.0]);
        p.add("a", vec![1.0], Relation::Le, 1.0);
        p.add("b", vec![1.0], Relation::Ge, 2.0);
        assert!(vertex_enumeration(&p, 1e-9).is_none());
    }

    #[test]
    fn combinations_are_exhaustive() {
        let mut s = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut s, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
