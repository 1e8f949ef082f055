//! Trips CSV reader.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fairmatch_core::data::{ingest_trips, IngestParams, Ingested, TripRecord};

pub const REQUIRED_COLUMNS: [&str; 8] = [
    "driver_hash",
    "pickup_datetime",
    "dropoff_datetime",
    "pickup_lon",
    "pickup_lat",
    "dropoff_lon",
    "dropoff_lat",
    "trip_distance",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripsRead {
    pub records: Vec<TripRecord>,
    /// Rows that could not be parsed (wrong field count, non-numeric values).
    pub malformed: u64,
}

/// Reads trip rows by header name; extra columns are ignored. Header names
/// are matched after trimming, case-insensitively.
pub fn read_trips<R: Read>(input: R) -> Result<TripsRead> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().context("reading CSV header")?.clone();
    let mut index = [0usize; 8];
    let mut missing = Vec::new();
    for (slot, name) in index.iter_mut().zip(REQUIRED_COLUMNS) {
        match headers.iter().position(|h| h.eq_ignore_ascii_case(name)) {
            Some(i) => *slot = i,
            None => missing.push(name),
        }
    }
    if !missing.is_empty() {
        bail!("trips CSV is missing column(s): {}", missing.join(", "));
    }
    let [driver, pickup_time, _dropoff_time, plon, plat, dlon, dlat, dist] = index;

    let mut out = TripsRead::default();
    for row in reader.records() {
        let Ok(row) = row else {
            out.malformed += 1;
            continue;
        };
        let num = |i: usize| row.get(i).and_then(|s| s.parse::<f64>().ok());
        let parsed = (|| {
            Some(TripRecord {
                driver_hash: row.get(driver).filter(|s| !s.is_empty())?.to_string(),
                pickup_datetime: row.get(pickup_time)?.to_string(),
                pickup_lat: num(plat)?,
                pickup_lon: num(plon)?,
                dropoff_lat: num(dlat)?,
                dropoff_lon: num(dlon)?,
                distance: num(dist)?,
            })
        })();
        match parsed {
            Some(rec) => out.records.push(rec),
            None => out.malformed += 1,
        }
    }
    Ok(out)
}

/// Reads a trips CSV file and runs ingestion; unparseable rows are counted
/// in the report.
pub fn ingest_csv(path: &Path, params: &IngestParams) -> Result<Ingested> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let read = read_trips(BufReader::new(file))?;
    let mut out = ingest_trips(read.records, params)
        .with_context(|| format!("ingesting {}", path.display()))?;
    out.report.dropped_malformed = read.malformed;
    out.report.records_read += read.malformed;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_by_header_and_counts_bad_rows() {
        let csv = "extra,driver_hash,pickup_datetime,dropoff_datetime,pickup_lon,pickup_lat,dropoff_lon,dropoff_lat,trip_distance\n\
                   z,abc,2013-01-01 19:00:00,2013-01-01 19:10:00,-73.97,40.75,-73.98,40.76,1.5\n\
                   z,abc,2013-01-01 19:00:00,2013-01-01 19:10:00,oops,40.75,-73.98,40.76,1.5\n\
                   z,abc,short\n";
        let read = read_trips(csv.as_bytes()).unwrap();
        assert_eq!(read.records.len(), 1);
        assert_eq!(read.malformed, 2);
        assert_eq!(read.records[0].pickup_lon, -73.97);
        assert_eq!(read.records[0].distance, 1.5);
    }

    #[test]
    fn missing_column_is_an_error() {
        let err = read_trips("driver_hash,pickup_lat\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("trip_distance"));
    }
}
