//! File formats, trip ingestion, multi-threaded sweeps and verification
//! reports on top of `fairmatch-core`.

pub mod io;
pub mod parallel;
pub mod star_check;
pub mod sweep;
pub mod trips;
pub mod verify;

pub use fairmatch_core as core;
