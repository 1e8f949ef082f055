//! Policy sweeps over the `(α, β)` grid and quota values.

use std::f64::consts::E;
use std::io::Write;

use anyhow::{bail, Result};
use fairmatch_core::lp::solve_benchmarks;
use fairmatch_core::policies::{NAdap, Policy};
use fairmatch_core::simulator::{competitive_ratios, Estimates, Ratios, SimConfig};
use fairmatch_core::{Graph, Instance};
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::parallel::monte_carlo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Nadap,
    Greedy,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Spacing of the `α` grid on `[0, 1]`, with `β = 1 - α`. Must divide 1.
    pub alpha_step: f64,
    /// Explicit `α` values; overrides `alpha_step` when set.
    pub alphas: Option<Vec<f64>>,
    pub deltas: Vec<u32>,
    pub iterations: u64,
    pub seed: u64,
    pub policies: Vec<PolicyKind>,
    /// Slack, in standard errors, allowed below the `α/e`, `β/e` bounds.
    pub sigma_gate: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha_step: 0.1,
            alphas: None,
            deltas: vec![1, 2, 3],
            iterations: 5000,
            seed: 0,
            policies: vec![PolicyKind::Nadap, PolicyKind::Greedy, PolicyKind::Uniform],
            sigma_gate: 4.0,
        }
    }
}

impl SweepConfig {
    /// `(α, β)` grid points with `β = 1 - α`.
    pub fn grid(&self) -> Result<Vec<(f64, f64)>> {
        let alphas = match &self.alphas {
            Some(a) => a.clone(),
            None => {
                let step = self.alpha_step;
                if !(step > 0.0 && step <= 1.0) {
                    bail!("alpha step {step} must lie in (0, 1]");
                }
                let n = (1.0 / step).round();
                if (n * step - 1.0).abs() > 1e-9 {
                    bail!("alpha step {step} does not divide 1");
                }
                let n = n as u32;
                (0..=n).map(|i| i as f64 / n as f64).collect()
            }
        };
        let mut grid = Vec::with_capacity(alphas.len());
        for a in alphas {
            if !(0.0..=1.0).contains(&a) {
                bail!("alpha {a} outside [0, 1]");
            }
            grid.push((a, 1.0 - a));
        }
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            bail!("iterations must be at least 1");
        }
        if self.deltas.is_empty() || self.deltas.contains(&0) {
            bail!("quota values must be a non-empty list of positive integers");
        }
        if self.policies.is_empty() {
            bail!("no policies selected");
        }
        if !(self.sigma_gate >= 0.0) {
            bail!("sigma_gate must be non-negative");
        }
        self.grid().map(|_| ())
    }
}

/// One CSV row. Baseline rows leave the mix and bound columns empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub policy: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: u32,
    pub profit_cr: Option<f64>,
    pub fairness_cr: Option<f64>,
    pub profit_lb: Option<f64>,
    pub fairness_lb: Option<f64>,
    pub profit_mean: f64,
    pub profit_se: f64,
    pub fairness: f64,
    pub fairness_se: f64,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "policy",
    "alpha",
    "beta",
    "delta",
    "profit_cr",
    "fairness_cr",
    "profit_lb",
    "fairness_lb",
    "profit_mean",
    "profit_se",
    "fairness",
    "fairness_se",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestRate {
    pub id: String,
    pub rate: f64,
    pub se: f64,
}

/// Estimates JSON record for one policy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub policy: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: u32,
    pub iterations: u64,
    pub profit_mean: f64,
    pub profit_se: f64,
    pub fairness: f64,
    pub per_v_rates: Vec<RequestRate>,
    pub ratios: Ratios,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaBenchmarks {
    pub delta: u32,
    pub opt_profit: f64,
    pub opt_fairness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub estimates: Vec<EstimateRecord>,
    pub benchmarks: Vec<DeltaBenchmarks>,
    /// NAdap rows falling below a bound by more than the allowed slack.
    pub violations: Vec<String>,
}

enum Job {
    Nadap(f64, f64),
    Greedy,
    Uniform,
}

pub fn run_sweep(
    instance: &Instance,
    config: &SweepConfig,
    pool: &ThreadPool,
) -> Result<SweepOutcome> {
    config.validate()?;
    let grid = config.grid()?;
    let mut out = SweepOutcome {
        rows: Vec::new(),
        estimates: Vec::new(),
        benchmarks: Vec::new(),
        violations: Vec::new(),
    };

    for &delta in &config.deltas {
        let graph = Graph::new(&instance.with_uniform_quota(delta))?;
        let bench = solve_benchmarks(&graph)?;
        out.benchmarks.push(DeltaBenchmarks {
            delta,
            opt_profit: bench.opt_profit,
            opt_fairness: bench.opt_fairness,
        });

        let mut jobs = Vec::new();
        for kind in &config.policies {
            match kind {
                PolicyKind::Nadap => jobs.extend(grid.iter().map(|&(a, b)| Job::Nadap(a, b))),
                PolicyKind::Greedy => jobs.push(Job::Greedy),
                PolicyKind::Uniform => jobs.push(Job::Uniform),
            }
        }
        let policies: Vec<(Policy, Option<(f64, f64)>)> = jobs
            .iter()
            .map(|job| {
                Ok(match *job {
                    Job::Nadap(a, b) => (
                        Policy::NAdap(NAdap::new(&graph, &bench.x_star, &bench.y_star, a, b)?),
                        Some((a, b)),
                    ),
                    Job::Greedy => (Policy::Greedy, None),
                    Job::Uniform => (Policy::Uniform, None),
                })
            })
            .collect::<Result<_>>()?;

        let results: Vec<Estimates> = pool.install(|| {
            policies
                .par_iter()
                .map(|(p, _)| {
                    monte_carlo(
                        pool,
                        &graph,
                        p,
                        config.iterations,
                        config.seed,
                        SimConfig::default(),
                    )
                })
                .collect()
        });

        for ((policy, mix), est) in policies.iter().zip(results) {
            let ratios = competitive_ratios(&est, bench.opt_profit, bench.opt_fairness);
            let bounds = mix.map(|(a, b)| (a / E, b / E));
            if let (Some((a, b)), Some((plb, flb))) = (mix, bounds) {
                let sigma = config.sigma_gate;
                if let Some(cr) = ratios.profit {
                    let slack = sigma * est.profit_se / bench.opt_profit;
                    if cr < plb - slack {
                        out.violations.push(format!(
                            "delta={delta} alpha={a} beta={b}: profit ratio {cr} < {plb} - {slack}"
                        ));
                    }
                }
                if let Some(cr) = ratios.fairness {
                    let slack = sigma * est.fairness_se / bench.opt_fairness;
                    if cr < flb - slack {
                        out.violations.push(format!(
                            "delta={delta} alpha={a} beta={b}: fairness ratio {cr} < {flb} - {slack}"
                        ));
                    }
                }
            }
            out.rows.push(SweepRow {
                policy: policy.name().into(),
                alpha: mix.map(|m| m.0),
                beta: mix.map(|m| m.1),
                delta,
                profit_cr: ratios.profit,
                fairness_cr: ratios.fairness,
                profit_lb: bounds.map(|b| b.0),
                fairness_lb: bounds.map(|b| b.1),
                profit_mean: est.mean_profit,
                profit_se: est.profit_se,
                fairness: est.fairness,
                fairness_se: est.fairness_se,
            });
            out.estimates.push(EstimateRecord {
                policy: policy.name().into(),
                alpha: mix.map(|m| m.0),
                beta: mix.map(|m| m.1),
                delta,
                iterations: est.iterations,
                profit_mean: est.mean_profit,
                profit_se: est.profit_se,
                fairness: est.fairness,
                per_v_rates: (0..graph.num_requests())
                    .map(|v| RequestRate {
                        id: graph.request_id(v).into(),
                        rate: est.request_rate[v],
                        se: est.request_rate_se[v],
                    })
                    .collect(),
                ratios,
            });
        }
    }
    Ok(out)
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.policy.clone(),
            cell(r.alpha),
            cell(r.beta),
            r.delta.to_string(),
            cell(r.profit_cr),
            cell(r.fairness_cr),
            cell(r.profit_lb),
            cell(r.fairness_lb),
            r.profit_mean.to_string(),
            r.profit_se.to_string(),
            r.fairness.to_string(),
            r.fairness_se.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::build_pool;
    use fairmatch_core::data::{generate_synthetic, SyntheticParams};

    #[test]
    fn default_grid_has_eleven_points() {
        let g = SweepConfig::default().grid().unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], (0.0, 1.0));
        assert_eq!(g[10], (1.0, 0.0));
        assert_eq!(g[3].0, 0.3);
        assert!(SweepConfig {
            alpha_step: 0.3,
            ..Default::default()
        }
        .grid()
        .is_err());
    }

    #[test]
    fn config_json_round_trip_and_defaults() {
        let cfg: SweepConfig =
            serde_json::from_str(r#"{"iterations": 10, "policies": ["greedy"]}"#).unwrap();
        assert_eq!(cfg.iterations, 10);
        assert_eq!(cfg.deltas, vec![1, 2, 3]);
        assert_eq!(cfg.policies, vec![PolicyKind::Greedy]);
        let back: SweepConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<SweepConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn rows_follow_the_schema() {
        let params = SyntheticParams {
            num_drivers: 6,
            num_request_types: 4,
            horizon: 20,
            edge_prob: 0.6,
            ..Default::default()
        };
        let inst = generate_synthetic(&params, 2).unwrap();
        let cfg = SweepConfig {
            alpha_step: 0.5,
            deltas: vec![1, 2],
            iterations: 200,
            ..Default::default()
        };
        let out = run_sweep(&inst, &cfg, &build_pool(2).unwrap()).unwrap();
        assert_eq!(out.rows.len(), 2 * (3 + 2));
        let alpha_one = out.rows.iter().find(|r| r.alpha == Some(1.0)).unwrap();
        assert_eq!(alpha_one.fairness_lb, Some(0.0));
        assert_eq!(alpha_one.profit_lb, Some(1.0 / E));
        let text = csv_string(&out.rows).unwrap();
        assert!(text.starts_with(&CSV_COLUMNS.join(",")));
        assert!(text.lines().any(|l| l.starts_with("greedy,,,1,")));
    }
}
