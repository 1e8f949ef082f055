//! Bi-objective (profit, fairness) online matching for rideshare dispatch.
//!
//! Drivers are offline vertices with unit capacity and a cancellation quota.
//! Request types arrive online for `T` rounds under known IID arrivals, and an
//! assigned driver accepts the request with the edge's acceptance probability.
//!
//! The crate covers:
//!
//! - [`instance`]: the problem data model, validation and the star fixture.
//! - [`lp`]: the profit and fairness benchmark LPs and a dense simplex solver.
//! - [`policies`]: non-adaptive sampling policies, `NAdap(α, β)`, Greedy and Uniform.
//! - [`simulator`]: episode simulation, Monte Carlo estimates, an exact
//!   expectation oracle and closed-form star-graph curves.
//! - [`data`]: synthetic instance generation and trip-record ingestion.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod data;
pub mod error;
pub mod instance;
pub mod lp;
pub mod policies;
pub mod simulator;
pub mod validation;

pub use error::Error;
pub use instance::{Driver, Edge, Graph, Instance, RequestType};
pub use validation::{Issue, Severity, ValidationReport};

pub type Result<T, E = Error> = core::result::Result<T, E>;
