use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{Driver, Edge, Instance, RequestType};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticParams {
    pub num_drivers: usize,
    pub num_request_types: usize,
    pub horizon: u32,
    pub edge_prob: f64,
    pub p_range: (f64, f64),
    pub w_range: (f64, f64),
    pub quota: u32,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            num_drivers: 100,
            num_request_types: 50,
            horizon: 700,
            edge_prob: 0.1,
            p_range: (0.5, 1.0),
            w_range: (0.0, 1.0),
            quota: 1,
        }
    }
}

impl SyntheticParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_drivers == 0 || self.num_request_types == 0 {
            return Err(Error::param(
                "num_drivers/num_request_types",
                "must be positive",
            ));
        }
        if (self.horizon as usize) < self.num_request_types {
            return Err(Error::param(
                "horizon",
                "must be at least the number of request types so every rate can be positive",
            ));
        }
        if self.quota == 0 {
            return Err(Error::param("quota", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.edge_prob) {
            return Err(Error::param("edge_prob", "must lie in [0, 1]"));
        }
        let (plo, phi) = self.p_range;
        // p = 0 edges are invalid, so the lower end must be strictly positive.
        if !(plo > 0.0 && plo <= phi && phi <= 1.0) {
            return Err(Error::param("p_range", "must satisfy 0 < lo <= hi <= 1"));
        }
        let (wlo, whi) = self.w_range;
        if !(wlo >= 0.0 && wlo <= whi && whi <= 1.0) {
            return Err(Error::param("w_range", "must satisfy 0 <= lo <= hi <= 1"));
        }
        Ok(())
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Random instance with multinomial rates summing to the horizon, Bernoulli
/// edges and uniform `p`, `w`. Deterministic in `seed`.
pub fn generate_synthetic(params: &SyntheticParams, seed: u64) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.num_request_types;

    // Multinomial(T, uniform) by counting T categorical draws.
    let mut counts = vec![0u32; n];
    for _ in 0..params.horizon {
        counts[rng.random_range(0..n)] += 1;
    }
    while let Some(zero) = counts.iter().position(|&c| c == 0) {
        let largest = (0..n).fold(0, |b, v| if counts[v] > counts[b] { v } else { b });
        counts[zero] = 1;
        counts[largest] -= 1;
    }

    let drivers: Vec<Driver> = (0..params.num_drivers)
        .map(|u| Driver {
            id: format!("u{u}"),
            quota: params.quota,
            group: None,
        })
        .collect();
    let request_types: Vec<RequestType> = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| RequestType {
            id: format!("v{v}"),
            rate: c as f64,
            group: None,
        })
        .collect();

    let mut edges = Vec::new();
    for driver in &drivers {
        for request in &request_types {
            if rng.random_bool(params.edge_prob) {
                let accept_prob = uniform_in(&mut rng, params.p_range);
                let profit = uniform_in(&mut rng, params.w_range);
                edges.push(Edge {
                    driver: driver.id.clone(),
                    request_type: request.id.clone(),
                    accept_prob,
                    profit,
                });
            }
        }
    }
    Ok(Instance {
        drivers,
        request_types,
        edges,
        horizon: params.horizon,
    })
}
