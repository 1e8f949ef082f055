use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fairmatch::core::data::{generate_synthetic, DemographicParams, IngestParams, SyntheticParams};
use fairmatch::core::instance::build_star_instance;
use fairmatch::core::lp::{build_fairness_lp, build_profit_lp, solve_benchmarks, write_lp_format};
use fairmatch::core::Graph;
use fairmatch::io::{read_instance, read_json, to_json_string, write_json, write_text};
use fairmatch::parallel::{build_pool, resolve_threads};
use fairmatch::star_check::{star_check, StarCheckParams};
use fairmatch::sweep::{csv_string, run_sweep, PolicyKind, SweepConfig};
use fairmatch::trips::ingest_csv;
use fairmatch::verify::verify_instance;
use serde::Serialize;

/// Profit/fairness online matching: benchmark LPs, policy sweeps and checks.
#[derive(Parser)]
#[command(name = "fairmatch", version)]
struct Cli {
    /// Worker threads (0 = all cores). FAIRMATCH_THREADS overrides this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random synthetic instance.
    GenSynthetic {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        drivers: usize,
        #[arg(long, default_value_t = 50)]
        requests: usize,
        #[arg(long, default_value_t = 700)]
        horizon: u32,
        #[arg(long, default_value_t = 0.1)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0.5)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.0)]
        w_min: f64,
        #[arg(long, default_value_t = 1.0)]
        w_max: f64,
        /// Cancellation quota for every driver.
        #[arg(long, default_value_t = 1)]
        delta: u32,
    },
    /// Build an instance from a trips CSV.
    Ingest {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Ingestion report path (default: next to --out with .report.json).
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value_t = 48)]
        target_drivers: usize,
        #[arg(long, default_value_t = 24)]
        target_requests: usize,
        #[arg(long, default_value_t = 1)]
        delta: u32,
    },
    /// Solve both benchmark LPs.
    SolveLp {
        instance: PathBuf,
        /// Solutions JSON (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for profit.lp and fairness.lp text dumps.
        #[arg(long)]
        lp_dir: Option<PathBuf>,
    },
    /// Run every policy over the (alpha, beta) grid and quota values.
    Sweep {
        instance: PathBuf,
        /// JSON file with SweepConfig fields; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        alpha_step: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',', value_parser = parse_policy)]
        policies: Option<Vec<PolicyKind>>,
        /// CSV output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Estimates JSON output.
        #[arg(long)]
        estimates_out: Option<PathBuf>,
    },
    /// Ratio-sum of symmetric vectors on the star instance against the cap.
    StarCheck {
        #[arg(long, default_value_t = 10)]
        k: u32,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        horizons: Vec<u32>,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and check both benchmarks and run the oracle suite.
    Verify {
        /// Instance file (default: the K=10, eps=0.01 star instance).
        instance: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown policy {s:?} (expected nadap, greedy or uniform)"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            print!("{}", to_json_string(value)?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct EdgeValue<'a> {
    u: &'a str,
    v: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct LpReport<'a> {
    opt_profit: f64,
    opt_fairness: f64,
    x_star: Vec<EdgeValue<'a>>,
    y_star: Vec<EdgeValue<'a>>,
}

/// `Ok(false)` means the command ran but a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::GenSynthetic {
            seed,
            out,
            drivers,
            requests,
            horizon,
            edge_prob,
            p_min,
            p_max,
            w_min,
            w_max,
            delta,
        } => {
            let params = SyntheticParams {
                num_drivers: drivers,
                num_request_types: requests,
                horizon,
                edge_prob,
                p_range: (p_min, p_max),
                w_range: (w_min, w_max),
                quota: delta,
            };
            let inst = generate_synthetic(&params, seed)?;
            write_json(&out, &inst)?;
            eprintln!(
                "wrote {}: {} drivers, {} request types, {} edges, T = {}",
                out.display(),
                inst.drivers.len(),
                inst.request_types.len(),
                inst.edges.len(),
                inst.horizon
            );
        }
        Command::Ingest {
            csv,
            out,
            report,
            seed,
            kappa,
            target_drivers,
            target_requests,
            delta,
        } => {
            let params = IngestParams {
                demo: DemographicParams {
                    kappa,
                    ..Default::default()
                },
                target_drivers,
                target_requests,
                quota: delta,
                seed,
                ..Default::default()
            };
            let ingested = ingest_csv(&csv, &params)?;
            let report_path = report.unwrap_or_else(|| out.with_extension("report.json"));
            write_json(&out, &ingested.instance)?;
            write_json(&report_path, &ingested.report)?;
            let r = &ingested.report;
            eprintln!(
                "wrote {} ({} drivers, {} request types, T = {}); {} rows read, {} malformed, {} invalid, {} out of grid",
                out.display(),
                ingested.instance.drivers.len(),
                ingested.instance.request_types.len(),
                ingested.instance.horizon,
                r.records_read,
                r.dropped_malformed,
                r.dropped_invalid,
                r.dropped_out_of_grid
            );
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::SolveLp {
            instance,
            out,
            lp_dir,
        } => {
            let inst = read_instance(&instance)?;
            let graph = Graph::new(&inst)?;
            if let Some(dir) = lp_dir {
                write_text(
                    &dir.join("profit.lp"),
                    &write_lp_format(&build_profit_lp(&graph), "profit benchmark"),
                )?;
                write_text(
                    &dir.join("fairness.lp"),
                    &write_lp_format(&build_fairness_lp(&graph), "fairness benchmark"),
                )?;
            }
            let b = solve_benchmarks(&graph)?;
            let values = |sol: &[f64]| {
                graph
                    .edges()
                    .iter()
                    .zip(sol)
                    .map(|(e, &value)| EdgeValue {
                        u: graph.driver_id(e.driver),
                        v: graph.request_id(e.request),
                        value,
                    })
                    .collect()
            };
            let report = LpReport {
                opt_profit: b.opt_profit,
                opt_fairness: b.opt_fairness,
                x_star: values(&b.x_star),
                y_star: values(&b.y_star),
            };
            emit(out.as_deref(), &report)?;
        }
        Command::Sweep {
            instance,
            config,
            seed,
            iterations,
            alpha_step,
            delta,
            policies,
            out,
            estimates_out,
        } => {
            let mut cfg: SweepConfig = match config {
                Some(p) => read_json(&p)?,
                None => SweepConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(i) = iterations {
                cfg.iterations = i;
            }
            if let Some(a) = alpha_step {
                cfg.alpha_step = a;
                cfg.alphas = None;
            }
            if let Some(d) = delta {
                cfg.deltas = d;
            }
            if let Some(p) = policies {
                cfg.policies = p;
            }
            let inst = read_instance(&instance)?;
            let pool = build_pool(resolve_threads(cli.threads)?)?;
            let outcome = run_sweep(&inst, &cfg, &pool)?;
            let text = csv_string(&outcome.rows)?;
            match out {
                Some(p) => write_text(&p, &text)?,
                None => print!("{text}"),
            }
            if let Some(p) = estimates_out {
                write_json(&p, &outcome.estimates)?;
            }
            for b in &outcome.benchmarks {
                eprintln!(
                    "delta {}: OPT-P {}, OPT-F {}",
                    b.delta, b.opt_profit, b.opt_fairness
                );
            }
            for v in &outcome.violations {
                eprintln!("bound violated: {v}");
            }
            return Ok(outcome.violations.is_empty());
        }
        Command::StarCheck {
            k,
            eps,
            horizons,
            step,
            out,
        } => {
            let report = star_check(&StarCheckParams {
                k,
                eps,
                horizons,
                step,
                ..Default::default()
            })?;
            for r in &report.results {
                eprintln!(
                    "T = {:>6}: max ratio-sum {:.6} at z0 = {}, z_rest = {}",
                    r.horizon.unwrap_or(0),
                    r.max_ratio_sum,
                    r.argmax_z0,
                    r.argmax_z_rest
                );
            }
            eprintln!(
                "T → ∞:    max ratio-sum {:.6}; cap {:.6}",
                report.limit.max_ratio_sum, report.cap
            );
            eprintln!(
                "within cap: {}, nondecreasing in T: {}, converging: {}",
                report.within_cap, report.nondecreasing, report.converging
            );
            emit(out.as_deref(), &report)?;
            return Ok(report.passed());
        }
        Command::Verify { instance, out } => {
            let inst = match instance {
                Some(p) => read_json(&p).with_context(|| format!("loading {}", p.display()))?,
                None => build_star_instance(10, 0.01, None)?,
            };
            let report = verify_instance(&inst)?;
            print!("{report}");
            if let Some(p) = out {
                write_json(&p, &report)?;
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}
