#![allow(dead_code)]

use fairmatch_core::{Driver, Edge, Instance, RequestType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct TinyShape {
    pub max_drivers: usize,
    pub max_requests: usize,
    pub max_horizon: u32,
    pub max_quota: u32,
}

/// Random valid instance with integer rates summing to the horizon.
pub fn random_instance(seed: u64, shape: &TinyShape) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=shape.max_drivers);
    let n = rng.random_range(1..=shape.max_requests);
    let horizon = rng.random_range(n as u32..=shape.max_horizon.max(n as u32));
    let mut rates = vec![1u32; n];
    for _ in n as u32..horizon {
        rates[rng.random_range(0..n)] += 1;
    }
    let drivers: Vec<Driver> = (0..m)
        .map(|u| Driver {
            id: format!("u{u}"),
            quota: rng.random_range(1..=shape.max_quota),
            group: None,
        })
        .collect();
    let request_types: Vec<RequestType> = rates
        .iter()
        .enumerate()
        .map(|(v, &r)| RequestType {
            id: format!("v{v}"),
            rate: r as f64,
            group: None,
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..m {
        for v in 0..n {
            if rng.random_bool(0.7) {
                edges.push(Edge {
                    driver: format!("u{u}"),
                    request_type: format!("v{v}"),
                    accept_prob: rng.random_range(0.1..=1.0),
                    profit: rng.random_range(0.0..=1.0),
                });
            }
        }
    }
    Instance {
        drivers,
        request_types,
        edges,
        horizon,
    }
}

pub fn uniform_two_type() -> Instance {
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
