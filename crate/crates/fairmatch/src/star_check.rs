//! Ratio-sum of symmetric non-adaptive vectors on the star instance against
//! the `1 - 1/e + 2ε` cap.

use anyhow::{bail, Result};
use fairmatch_core::simulator::{star_curves, star_limit, StarValues};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarCheckParams {
    pub k: u32,
    pub eps: f64,
    pub horizons: Vec<u32>,
    /// Grid spacing for `z0` and `z_rest`.
    pub step: f64,
    /// Allowed excess over the cap.
    pub tolerance: f64,
}

impl Default for StarCheckParams {
    fn default() -> Self {
        Self {
            k: 10,
            eps: 0.01,
            horizons: vec![100, 1_000, 10_000],
            step: 0.05,
            tolerance: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonResult {
    /// `None` for the `T → ∞` limit.
    pub horizon: Option<u32>,
    pub max_ratio_sum: f64,
    pub argmax_z0: f64,
    pub argmax_z_rest: f64,
    pub profit_ratio: f64,
    pub fairness_ratio: f64,
    /// Profit ratio of `z0 = 1, z_rest = 0`.
    pub full_profit_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarCheckReport {
    pub params: StarCheckParams,
    pub opt_profit: f64,
    pub opt_fairness: f64,
    pub cap: f64,
    pub results: Vec<HorizonResult>,
    pub limit: HorizonResult,
    /// Max ratio-sum at the largest horizon is at most `cap + tolerance`.
    pub within_cap: bool,
    /// Max ratio-sum does not decrease as the horizon grows.
    pub nondecreasing: bool,
    /// Distance to the `T → ∞` value shrinks as the horizon grows.
    pub converging: bool,
}

impl StarCheckReport {
    pub fn passed(&self) -> bool {
        self.within_cap && self.nondecreasing
    }
}

fn scan(
    params: &StarCheckParams,
    opt_f: f64,
    eval: impl Fn(f64, f64) -> Result<StarValues>,
) -> Result<HorizonResult> {
    let n = (1.0 / params.step).round() as u32;
    let mut best: Option<HorizonResult> = None;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (z0, zr) = (i as f64 / n as f64, j as f64 / n as f64);
            let v = eval(z0, zr)?;
            let (pr, fr) = (v.profit, v.fairness / opt_f);
            if best.as_ref().is_none_or(|b| pr + fr > b.max_ratio_sum) {
                best = Some(HorizonResult {
                    horizon: None,
                    max_ratio_sum: pr + fr,
                    argmax_z0: z0,
                    argmax_z_rest: zr,
                    profit_ratio: pr,
                    fairness_ratio: fr,
                    full_profit_ratio: 0.0,
                });
            }
        }
    }
    let mut best = best.expect("grid is non-empty");
    best.full_profit_ratio = eval(1.0, 0.0)?.profit;
    Ok(best)
}

pub fn star_check(params: &StarCheckParams) -> Result<StarCheckReport> {
    let n = (1.0 / params.step).round();
    if !(params.step > 0.0 && (n * params.step - 1.0).abs() < 1e-9) {
        bail!("z grid step {} must divide 1", params.step);
    }
    if params.horizons.is_empty() {
        bail!("need at least one horizon");
    }
    let (k, eps) = (params.k, params.eps);
    // Profit optimum is 1 (always serve v0); fairness optimum balances
    // p·x across the K+1 types.
    let opt_profit = 1.0;
    let opt_fairness = eps / (k as f64 + eps);
    let cap = 1.0 - (-1.0f64).exp() + 2.0 * eps;

    let mut horizons = params.horizons.clone();
    horizons.sort_unstable();
    horizons.dedup();
    let mut results = Vec::new();
    for &t in &horizons {
        let mut r = scan(params, opt_fairness, |z0, zr| {
            Ok(star_curves(z0, zr, k, eps, t)?)
        })?;
        r.horizon = Some(t);
        results.push(r);
    }
    let limit = scan(params, opt_fairness, |z0, zr| {
        Ok(star_limit(z0, zr, k, eps)?)
    })?;

    let maxes: Vec<f64> = results.iter().map(|r| r.max_ratio_sum).collect();
    let within_cap = *maxes.last().unwrap() <= cap + params.tolerance;
    let nondecreasing = maxes.windows(2).all(|w| w[1] >= w[0]);
    let converging = maxes
        .windows(2)
        .all(|w| (w[1] - limit.max_ratio_sum).abs() <= (w[0] - limit.max_ratio_sum).abs());
    Ok(StarCheckReport {
        params: StarCheckParams {
            horizons,
            ..params.clone()
        },
        opt_profit,
        opt_fairness,
        cap,
        results,
        limit,
        within_cap,
        nondecreasing,
        converging,
    })
}
