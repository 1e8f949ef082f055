//! Closed-form expectations on the one-driver star instance, and the
//! per-round availability bound used in the `α/e, β/e` guarantee.
//!
//! The star curves model the instance where each of the `K + 1` request
//! types arrives with probability `1/T` per round (unit rates, and an idle
//! round with the remaining probability when `T > K + 1`). A symmetric
//! non-adaptive vector samples `v0`'s edge with probability `z0` and each
//! other edge with `z_rest / K`. With `z = z0 + z_rest` the single driver
//! receives an assignment in a round with probability `z/T` until it
//! receives its first one, so
//!
//! ```text
//! S      = Σ_{t=1}^{T} (1 - z/T)^{t-1}
//! P      = (z0 + z_rest·ε) / T · S
//! E|M_0| = z0 / T · S,    E|M_j| = (z_rest/K)·ε / T · S   (j ≥ 1)
//! F      = min(E|M_0|, E|M_j|)
//! ```
//!
//! As `T → ∞`, `S/T → (1 - e^{-z}) / z`.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarValues {
    pub profit: f64,
    pub fairness: f64,
    /// Expected matches of `v0` divided by its rate.
    pub rate_v0: f64,
    /// Expected matches of each `v_j`, `j ≥ 1`, divided by its rate.
    pub rate_leaf: f64,
}

impl StarValues {
    fn from_factor(z0: f64, z_rest: f64, k: u32, eps: f64, factor: f64) -> Self {
        let rate_v0 = z0 * factor;
        let rate_leaf = z_rest / k as f64 * eps * factor;
        Self {
            profit: (z0 + z_rest * eps) * factor,
            fairness: rate_v0.min(rate_leaf),
            rate_v0,
            rate_leaf,
        }
    }
}

fn check(z0: f64, z_rest: f64, k: u32, eps: f64) -> Result<()> {
    if !(z0 >= 0.0 && z_rest >= 0.0) {
        return Err(Error::param("z", "sampling masses must be non-negative"));
    }
    if z0 + z_rest > 1.0 + 1e-12 {
        return Err(Error::param("z", "z0 + z_rest must not exceed 1"));
    }
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param("eps", "must lie in (0, 1]"));
    }
    Ok(())
}

/// Exact finite-horizon profit and fairness of the symmetric vector
/// `(z0, z_rest/K, ..., z_rest/K)` on the star instance.
pub fn star_curves(z0: f64, z_rest: f64, k: u32, eps: f64, horizon: u32) -> Result<StarValues> {
    check(z0, z_rest, k, eps)?;
    if horizon == 0 {
        return Err(Error::param("horizon", "must be positive"));
    }
    let t = horizon as f64;
    let keep = 1.0 - (z0 + z_rest) / t;
    let mut survive = 1.0;
    let mut sum = 0.0;
    for _ in 0..horizon {
        sum += survive;
        survive *= keep;
    }
    Ok(StarValues::from_factor(z0, z_rest, k, eps, sum / t))
}

/// The `T → ∞` limit of [`star_curves`].
pub fn star_limit(z0: f64, z_rest: f64, k: u32, eps: f64) -> Result<StarValues> {
    check(z0, z_rest, k, eps)?;
    let z = z0 + z_rest;
    // (1 - e^{-z}) / z → 1 as z → 0
    let factor = if z == 0.0 { 1.0 } else { -libm::expm1(-z) / z };
    Ok(StarValues::from_factor(z0, z_rest, k, eps, factor))
}

/// Lower bound on the probability that a driver is available at the start
/// of round `t` (1-based) under `NAdap(α, β)` with `α + β ≤ 1`:
/// `(1 - 1/T)^{t-1} · (1 - (t-1)/T)`.
pub fn availability_lower_bound(t: u32, horizon: u32) -> Result<f64> {
    if horizon == 0 || t == 0 || t > horizon {
        return Err(Error::param("t", "need 1 ≤ t ≤ T"));
    }
    let big_t = horizon as f64;
    let k = (t - 1) as i32;
    Ok(libm::pow(1.0 - 1.0 / big_t, k as f64) * (1.0 - k as f64 / big_t))
}

/// `Σ_{t=1}^{T} (1/T)·(1 - 1/T)^{t-1}·(1 - (t-1)/T)`: the factor multiplying
/// `α x*_f + β y*_f` in the lower bound on expected successful assignments of
/// an edge. Tends to `1/e`.
pub fn assignment_bound_factor(horizon: u32) -> f64 {
    let t = horizon as f64;
    (1..=horizon)
        .map(|s| availability_lower_bound(s, horizon).unwrap_or(0.0) / t)
        .sum()
}
