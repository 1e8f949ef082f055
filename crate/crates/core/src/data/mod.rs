//! Instance producers: a random synthetic generator and a trip-record
//! ingestion pipeline.

mod demographics;
mod grid;
mod ingest;
mod synthetic;

pub use demographics::{assign_accept_prob, DemographicParams, Group};
pub use grid::{bin_location, GridSpec};
pub use ingest::{
    ingest_trips, IngestParams, IngestReport, Ingested, TripRecord, RATE_MEAN, RATE_SD,
};
pub use synthetic::{generate_synthetic, SyntheticParams};
