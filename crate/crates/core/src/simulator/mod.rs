//! KIID simulation, Monte Carlo estimation and exact reference evaluation.

mod episode;
mod estimates;
mod exact;
pub mod seed;
mod star;

pub use episode::{
    run_episode, ArrivalSampler, DriverState, EpisodeOutcome, Match, RemovalRule, SimConfig,
};
pub use estimates::{
    competitive_ratios, pairwise_sum, run_iteration, run_monte_carlo, run_monte_carlo_with,
    tally_range, Estimates, Ratios, Tally,
};
pub use exact::{exact_evaluate, exact_evaluate_policy, ExactEvaluation, EXACT_WORK_LIMIT};
pub use star::{
    assignment_bound_factor, availability_lower_bound, star_curves, star_limit, StarValues,
};
