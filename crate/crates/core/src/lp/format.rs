//! Text dump of an [`LpProblem`] in CPLEX LP format, readable by most
//! external solvers (GLPK `--lp`, HiGHS, CBC, Gurobi).
//!
//! Layout:
//!
//! ```text
//! \ <title>
//! Maximize
//!  obj: <c_0> <name_0> + <c_1> <name_1> ...
//! Subject To
//!  <row name>: <a_0> <name_0> + ... <= | = | >= <rhs>
//! Bounds
//!  <name_j> >= 0
//! End
//! ```
//!
//! Zero coefficients are omitted and numbers use the shortest representation
//! that round-trips. Names are sanitized to the LP-format character set, with
//! any other character replaced by `_`.

use alloc::string::String;
use core::fmt::Write;

use super::problem::LpProblem;

pub fn write_lp_format(prob: &LpProblem, title: &str) -> String {
    let mut out = String::new();
    let names: alloc::vec::Vec<String> = prob.variable_names.iter().map(|n| sanitize(n)).collect();
    let _ = writeln!(out, "\\ {title}");
    out.push_str("Maximize\n obj:");
    write_terms(&mut out, &prob.objective, &names);
    out.push_str("\nSubject To\n");
    for (i, c) in prob.constraints.iter().enumerate() {
        let _ = write!(out, " c{i}_{}:", sanitize(&c.name));
        write_terms(&mut out, &c.coeffs, &names);
        let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for n in &names {
        let _ = writeln!(out, " {n} >= 0");
    }
    out.push_str("End\n");
    out
}

fn write_terms(out: &mut String, coeffs: &[f64], names: &[String]) {
    let mut first = true;
    for (a, n) in coeffs.iter().zip(names) {
        if *a == 0.0 {
            continue;
        }
        let sign = if *a < 0.0 { '-' } else { '+' };
        if first && sign == '+' {
            let _ = write!(out, " {} {n}", a);
        } else {
            let _ = write!(out, " {sign} {} {n}", libm::fabs(*a));
        }
        first = false;
    }
    if first {
        out.push_str(" 0 ");
        if let Some(n) = names.first() {
            out.push_str(n);
        }
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "!\"#$%&()/,.;?@_`'{}|~".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::problem::Relation;
    use alloc::vec;

    #[test]
    fn renders_rows_and_bounds() {
        let mut p = LpProblem::new(vec![1.5, 0.0]);
        p.variable_names = vec!["x(a,b)".into(), "eta".into()];
        p.add("rate(b c)", vec![1.0, -2.0], Relation::Le, 3.0);
        let text = write_lp_format(&p, "demo");
        assert_eq!(
            text,
            "\\ demo\nMaximize\n obj: 1.5 x(a,b)\nSubject To\n c0_rate(b_c): 1 x(a,b) - 2 eta <= 3\n\
             Bounds\n x(a,b) >= 0\n eta >= 0\nEnd\n"
        );
    }
}
