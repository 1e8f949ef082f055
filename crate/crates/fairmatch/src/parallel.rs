//! Multi-threaded Monte Carlo on a rayon pool.
//!
//! Iterations are cut into fixed-size blocks independent of the thread
//! count; each block is tallied on its own and the tallies are merged. The
//! merge is exact (see [`Tally`]), so results are identical for any pool size.

use anyhow::{Context, Result};
use fairmatch_core::policies::Policy;
use fairmatch_core::simulator::{tally_range, Estimates, SimConfig, Tally};
use fairmatch_core::Graph;
use rayon::prelude::*;
use rayon::ThreadPool;

pub const THREADS_ENV: &str = "FAIRMATCH_THREADS";

const BLOCK: u64 = 256;

/// Thread count: `FAIRMATCH_THREADS` if set, else the flag, else all cores
/// (0 also means all cores).
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count")),
        _ => Ok(flag.unwrap_or(0)),
    }
}

pub fn build_pool(threads: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building thread pool")
}

pub fn monte_carlo(
    pool: &ThreadPool,
    graph: &Graph,
    policy: &Policy,
    iterations: u64,
    base_seed: u64,
    config: SimConfig,
) -> Estimates {
    let blocks: Vec<u64> = (0..iterations.div_ceil(BLOCK)).collect();
    let tally = pool.install(|| {
        blocks
            .par_iter()
            .map(|&b| {
                let end = ((b + 1) * BLOCK).min(iterations);
                tally_range(graph, policy, config, base_seed, b * BLOCK..end)
            })
            .reduce(
                || Tally::new(graph),
                |mut a, b| {
                    a.merge(b);
                    a
                },
            )
    });
    tally.finish(graph)
}
