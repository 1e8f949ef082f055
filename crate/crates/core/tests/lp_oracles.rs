mod common;

use common::{random_instance, TinyShape};
use fairmatch_core::lp::brute::vertex_enumeration;
use fairmatch_core::lp::{
    build_fairness_lp, build_profit_lp, check_feasibility, evaluate_fairness, evaluate_profit,
    solve_benchmarks, solve_lp, LpProblem, LpStatus, Relation, REPORTING_TOLERANCE,
};
use fairmatch_core::{instance::build_star_instance, Driver, Edge, Graph, Instance, RequestType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TINY: TinyShape = TinyShape {
    max_drivers: 4,
    max_requests: 4,
    max_horizon: 8,
    max_quota: 3,
};

#[test]
fn star_benchmarks() {
    let g = Graph::new(&build_star_instance(10, 0.01, None).unwrap()).unwrap();
    let b = solve_benchmarks(&g).unwrap();
    assert!((b.opt_profit - 1.0).abs() < 1e-6);
    assert!((b.x_star[0] - 1.0).abs() < 1e-6);
    assert!(b.x_star[1..].iter().all(|x| x.abs() < 1e-6));
    let opt_f = 0.01 / 10.01;
    assert!((b.opt_fairness - opt_f).abs() < 1e-6);
    assert!((evaluate_fairness(&g, &b.y_star) - opt_f).abs() < 1e-9);
    assert!((evaluate_profit(&g, &b.x_star) - 1.0).abs() < 1e-9);
}

#[test]
fn star_fairness_solution_is_the_balanced_one() {
    // p·x equal across types: x0 = eps/(K+eps), x_j = 1/(K+eps)
    let g = Graph::new(&build_star_instance(10, 0.01, None).unwrap()).unwrap();
    let b = solve_benchmarks(&g).unwrap();
    let fair = evaluate_fairness(&g, &b.y_star);
    for v in 0..g.num_requests() {
        let f = g.request_edges(v)[0];
        assert!(g.edge(f).accept_prob * b.y_star[f] >= fair - 1e-9);
    }
}

#[test]
fn two_by_two_complete_fairness_is_one() {
    let ids = ["a", "b"];
    let inst = Instance {
        drivers: ids
            .iter()
            .map(|d| Driver {
                id: (*d).into(),
                quota: 1,
                group: None,
            })
            .collect(),
        request_types: ["x", "y"]
            .iter()
            .map(|v| RequestType {
                id: (*v).into(),
                rate: 1.0,
                group: None,
            })
            .collect(),
        edges: ids
            .iter()
            .flat_map(|d| {
                ["x", "y"].iter().map(move |v| Edge {
                    driver: (*d).into(),
                    request_type: (*v).into(),
                    accept_prob: 1.0,
                    profit: 1.0,
                })
            })
            .collect(),
        horizon: 2,
    };
    let g = Graph::new(&inst).unwrap();
    let b = solve_benchmarks(&g).unwrap();
    assert!((b.opt_fairness - 1.0).abs() < 1e-9);
    let brute = vertex_enumeration(&build_fairness_lp(&g), 1e-9).unwrap();
    assert!((brute.0 - 1.0).abs() < 1e-9);
    assert!((evaluate_fairness(&g, &[0.5; 4]) - 1.0).abs() < 1e-15);
}

#[test]
fn single_edge_and_empty_edge_set() {
    let mut inst = Instance {
        drivers: vec![Driver {
            id: "a".into(),
            quota: 1,
            group: None,
        }],
        request_types: vec![RequestType {
            id: "x".into(),
            rate: 1.0,
            group: None,
        }],
        edges: vec![Edge {
            driver: "a".into(),
            request_type: "x".into(),
            accept_prob: 1.0,
            profit: 0.7,
        }],
        horizon: 1,
    };
    let b = solve_benchmarks(&Graph::new(&inst).unwrap()).unwrap();
    assert!((b.opt_profit - 0.7).abs() < 1e-12);
    assert!((b.x_star[0] - 1.0).abs() < 1e-12);

    inst.edges.clear();
    let b = solve_benchmarks(&Graph::new(&inst).unwrap()).unwrap();
    assert_eq!((b.opt_profit, b.opt_fairness), (0.0, 0.0));
}

#[test]
fn benchmark_solutions_are_feasible_and_dominate_each_other() {
    for seed in 0..50 {
        let g = Graph::new(&random_instance(seed, &TINY)).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        assert!(
            check_feasibility(&g, &b.x_star, REPORTING_TOLERANCE).is_valid(),
            "seed {seed}"
        );
        assert!(
            check_feasibility(&g, &b.y_star, REPORTING_TOLERANCE).is_valid(),
            "seed {seed}"
        );
        assert!(
            b.opt_profit >= evaluate_profit(&g, &b.y_star) - 1e-7,
            "seed {seed}"
        );
        assert!(
            b.opt_fairness >= evaluate_fairness(&g, &b.x_star) - 1e-7,
            "seed {seed}"
        );
    }
}

#[test]
fn benchmark_lps_match_vertex_enumeration() {
    let shape = TinyShape {
        max_drivers: 2,
        max_requests: 3,
        max_horizon: 5,
        max_quota: 2,
    };
    for seed in 0..30 {
        let g = Graph::new(&random_instance(1000 + seed, &shape)).unwrap();
        if g.num_edges() > 5 {
            continue;
        }
        for prob in [build_profit_lp(&g), build_fairness_lp(&g)] {
            let simplex = solve_lp(&prob).unwrap();
            let (brute, _) = vertex_enumeration(&prob, 1e-9).unwrap();
            assert!(
                (simplex.objective_value - brute).abs() < 1e-7,
                "seed {seed}"
            );
        }
    }
}

fn random_lp(rng: &mut ChaCha8Rng) -> LpProblem {
    let n = rng.random_range(1..=6);
    let m = rng.random_range(1..=6);
    let mut p = LpProblem::new((0..n).map(|_| rng.random_range(-1.0..=3.0)).collect());
    for i in 0..m {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=4.0)).collect();
        let rel = match rng.random_range(0..6) {
            0 => Relation::Ge,
            1 => Relation::Eq,
            _ => Relation::Le,
        };
        let rhs = match rel {
            Relation::Le => rng.random_range(0.0..=10.0),
            _ => rng.random_range(0.0..=3.0),
        };
        p.add(format!("r{i}"), coeffs, rel, rhs);
    }
    // a box keeps every instance bounded so a vertex optimum exists
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        p.add(format!("box{j}"), e, Relation::Le, 20.0);
    }
    p
}

#[test]
fn simplex_matches_vertex_enumeration_on_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..100 {
        let prob = random_lp(&mut rng);
        let simplex = solve_lp(&prob).unwrap();
        match (simplex.status, vertex_enumeration(&prob, 1e-9)) {
            (LpStatus::Optimal, Some((brute, _))) => {
                assert!(
                    (simplex.objective_value - brute).abs() < 1e-7,
                    "case {case}"
                );
                assert!(prob.max_violation(&simplex.values) < 1e-7, "case {case}");
                optimal += 1;
            }
            (LpStatus::Infeasible, None) => infeasible += 1,
            (status, brute) => panic!("case {case}: simplex {status:?} vs enumeration {brute:?}"),
        }
    }
    assert!(
        optimal > 50,
        "only {optimal} optimal cases ({infeasible} infeasible)"
    );
}
