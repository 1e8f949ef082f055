//! Trip records to instance: grid binning, group labelling, type
//! aggregation and downsampling.
//!
//! Group labels are drawn from a hash of the seed and the record content
//! rather than from a positional RNG stream, so the result does not depend on
//! record order or on how the input was sharded.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::demographics::{DemographicParams, Group};
use super::grid::GridSpec;
use crate::instance::{Driver, Edge, Instance, RequestType};
use crate::simulator::seed::splitmix64;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripRecord {
    pub driver_hash: String,
    pub pickup_datetime: String,
    pub pickup_lat: f64,
    pub pickup_lon: f64,
    pub dropoff_lat: f64,
    pub dropoff_lon: f64,
    /// Miles.
    pub distance: f64,
}

impl TripRecord {
    pub fn is_valid(&self) -> bool {
        [
            self.pickup_lat,
            self.pickup_lon,
            self.dropoff_lat,
            self.dropoff_lon,
        ]
        .iter()
        .all(|c| c.is_finite())
            && self.distance.is_finite()
            && self.distance >= 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestParams {
    pub grid: GridSpec,
    pub demo: DemographicParams,
    pub target_drivers: usize,
    pub target_requests: usize,
    pub quota: u32,
    pub seed: u64,
}

impl Default for IngestParams {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            demo: DemographicParams::default(),
            target_drivers: 48,
            target_requests: 24,
            quota: 1,
            seed: 0,
        }
    }
}

/// Mean and standard deviation of the per-request-type rate draw.
pub const RATE_MEAN: f64 = 15.0;
pub const RATE_SD: f64 = 1.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub records_read: u64,
    pub records_kept: u64,
    /// Rows the caller could not parse; filled in by the reader.
    pub dropped_malformed: u64,
    pub dropped_invalid: u64,
    pub dropped_out_of_grid: u64,
    pub distinct_drivers: u64,
    pub disadvantaged_drivers: u64,
    pub disadvantaged_riders: u64,
    /// Distinct (driver, start bin) pairs.
    pub driver_occurrences: u64,
    pub driver_types_found: u64,
    pub request_types_found: u64,
    pub driver_types_selected: u64,
    pub request_types_selected: u64,
    pub horizon: u32,
    /// Kept records per pickup bin.
    pub pickup_bins: BTreeMap<u32, u64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub instance: Instance,
    pub report: IngestReport,
}

const DRIVER_SALT: u64 = 0x6472_6976_6572_0001;
const RIDER_SALT: u64 = 0x7269_6465_7200_0002;
const SAMPLE_SALT: u64 = 0x7361_6d70_6c65_0003;

fn fnv1a(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        // separator so ("ab","c") and ("a","bc") differ
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Deterministic uniform in [0, 1) from a content hash.
fn keyed_unit(seed: u64, salt: u64, content: u64) -> f64 {
    let h = splitmix64(content ^ splitmix64(seed ^ salt));
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn driver_group(seed: u64, demo: &DemographicParams, driver_hash: &str) -> Group {
    let u = keyed_unit(seed, DRIVER_SALT, fnv1a(&[driver_hash.as_bytes()]));
    if u < demo.driver_disadvantaged_share() {
        Group::Disadvantaged
    } else {
        Group::Advantaged
    }
}

fn rider_group(seed: u64, demo: &DemographicParams, rec: &TripRecord) -> Group {
    let content = fnv1a(&[
        rec.driver_hash.as_bytes(),
        rec.pickup_datetime.as_bytes(),
        &rec.pickup_lat.to_bits().to_le_bytes(),
        &rec.pickup_lon.to_bits().to_le_bytes(),
        &rec.dropoff_lat.to_bits().to_le_bytes(),
        &rec.dropoff_lon.to_bits().to_le_bytes(),
        &rec.distance.to_bits().to_le_bytes(),
    ]);
    if keyed_unit(seed, RIDER_SALT, content) < demo.rider_disadvantaged_share() {
        Group::Disadvantaged
    } else {
        Group::Advantaged
    }
}

type DriverKey = (u32, Group);
type RequestKey = (u32, u32, Group);

/// Builds an instance from trip records.
///
/// Driver types are distinct (pickup bin, driver group); request types are
/// distinct (pickup bin, dropoff bin, rider group). An edge joins a driver
/// type and a request type iff they share the pickup bin. Request types are
/// sampled without replacement, preferring those with a driver type in their
/// bin; then one driver type is drawn in each selected request's bin before
/// the remaining driver slots are filled uniformly. Rates are `N(15, 1)`
/// draws truncated at 1 and rounded, and the horizon is their sum.
pub fn ingest_trips<I>(records: I, params: &IngestParams) -> Result<Ingested>
where
    I: IntoIterator<Item = TripRecord>,
{
    if !params.grid.is_valid() {
        return Err(Error::param(
            "grid",
            "step must be positive and bounds ordered",
        ));
    }
    params.demo.validate()?;
    if params.target_drivers == 0 || params.target_requests == 0 {
        return Err(Error::param("targets", "must be positive"));
    }
    if params.quota == 0 {
        return Err(Error::param("quota", "must be at least 1"));
    }
    let seed = params.seed;
    let demo = &params.demo;
    let mut report = IngestReport::default();

    let mut drivers_seen: BTreeMap<String, Group> = BTreeMap::new();
    let mut occurrences: BTreeSet<(String, u32)> = BTreeSet::new();
    let mut driver_types: BTreeSet<DriverKey> = BTreeSet::new();
    let mut request_types: BTreeMap<RequestKey, Vec<f64>> = BTreeMap::new();

    for rec in records {
        report.records_read += 1;
        if !rec.is_valid() {
            report.dropped_invalid += 1;
            continue;
        }
        let (Some(start), Some(end)) = (
            params.grid.bin(rec.pickup_lat, rec.pickup_lon),
            params.grid.bin(rec.dropoff_lat, rec.dropoff_lon),
        ) else {
            report.dropped_out_of_grid += 1;
            continue;
        };
        report.records_kept += 1;
        *report.pickup_bins.entry(start).or_default() += 1;

        let dg = *drivers_seen
            .entry(rec.driver_hash.clone())
            .or_insert_with(|| driver_group(seed, demo, &rec.driver_hash));
        occurrences.insert((rec.driver_hash.clone(), start));
        driver_types.insert((start, dg));

        let rg = rider_group(seed, demo, &rec);
        if rg == Group::Disadvantaged {
            report.disadvantaged_riders += 1;
        }
        request_types
            .entry((start, end, rg))
            .or_default()
            .push(rec.distance);
    }

    report.distinct_drivers = drivers_seen.len() as u64;
    report.disadvantaged_drivers = drivers_seen
        .values()
        .filter(|&&g| g == Group::Disadvantaged)
        .count() as u64;
    report.driver_occurrences = occurrences.len() as u64;
    report.driver_types_found = driver_types.len() as u64;
    report.request_types_found = request_types.len() as u64;
    if driver_types.is_empty() || request_types.is_empty() {
        return Err(Error::EmptyAfterFiltering);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ SAMPLE_SALT));

    // Request types: shuffled, those with a driver type in their bin first.
    let driver_bins: BTreeSet<u32> = driver_types.iter().map(|k| k.0).collect();
    let mut req_keys: Vec<RequestKey> = request_types.keys().copied().collect();
    req_keys.shuffle(&mut rng);
    let (mut chosen_req, unserved): (Vec<RequestKey>, Vec<RequestKey>) = req_keys
        .into_iter()
        .partition(|k| driver_bins.contains(&k.0));
    chosen_req.extend(unserved);
    if chosen_req.len() < params.target_requests {
        report.warnings.push(format!(
            "only {} request types available, fewer than the target {}",
            chosen_req.len(),
            params.target_requests
        ));
    }
    chosen_req.truncate(params.target_requests);

    // Driver types: cover the selected requests' bins, then fill.
    let mut remaining: Vec<DriverKey> = driver_types.iter().copied().collect();
    let mut chosen_drv: Vec<DriverKey> = Vec::new();
    for req in &chosen_req {
        if chosen_drv.len() >= params.target_drivers {
            break;
        }
        if chosen_drv.iter().any(|d| d.0 == req.0) {
            continue;
        }
        let candidates: Vec<usize> = (0..remaining.len())
            .filter(|&i| remaining[i].0 == req.0)
            .collect();
        if !candidates.is_empty() {
            let pick = candidates[rng.random_range(0..candidates.len())];
            chosen_drv.push(remaining.remove(pick));
        }
    }
    remaining.shuffle(&mut rng);
    let room = params.target_drivers.saturating_sub(chosen_drv.len());
    chosen_drv.extend(remaining.into_iter().take(room));
    if chosen_drv.len() < params.target_drivers {
        report.warnings.push(format!(
            "only {} driver types available, fewer than the target {}",
            chosen_drv.len(),
            params.target_drivers
        ));
    }

    chosen_req.sort_unstable();
    chosen_drv.sort_unstable();
    report.request_types_selected = chosen_req.len() as u64;
    report.driver_types_selected = chosen_drv.len() as u64;

    let normal = Normal::new(RATE_MEAN, RATE_SD).expect("valid normal parameters");
    let mut rates = Vec::with_capacity(chosen_req.len());
    for _ in &chosen_req {
        let draw: f64 = normal.sample(&mut rng);
        rates.push(libm::round(draw.max(1.0)));
    }
    let horizon_f: f64 = rates.iter().sum();
    if horizon_f > u32::MAX as f64 {
        return Err(Error::param(
            "target_requests",
            "total rate overflows the horizon",
        ));
    }
    let horizon = horizon_f as u32;
    report.horizon = horizon;

    let mean_distance: Vec<f64> = chosen_req
        .iter()
        .map(|k| {
            let mut d = request_types[k].clone();
            d.sort_unstable_by(f64::total_cmp);
            d.iter().sum::<f64>() / d.len() as f64
        })
        .collect();
    let max_distance = mean_distance.iter().copied().fold(0.0, f64::max);

    let drivers: Vec<Driver> = chosen_drv
        .iter()
        .map(|&(bin, g)| Driver {
            id: format!("d{bin}-{}", g.short()),
            quota: params.quota,
            group: Some(g.as_str().into()),
        })
        .collect();
    let requests: Vec<RequestType> = chosen_req
        .iter()
        .zip(&rates)
        .map(|(&(start, end, g), &rate)| RequestType {
            id: format!("r{start}-{end}-{}", g.short()),
            rate,
            group: Some(g.as_str().into()),
        })
        .collect();

    let mut edges = Vec::new();
    for (u, &(dbin, dg)) in chosen_drv.iter().enumerate() {
        for (v, &(start, _, rg)) in chosen_req.iter().enumerate() {
            if start != dbin {
                continue;
            }
            // All-zero distances normalize to 1, as equal values would.
            let profit = if max_distance > 0.0 {
                mean_distance[v] / max_distance
            } else {
                1.0
            };
            edges.push(Edge {
                driver: drivers[u].id.clone(),
                request_type: requests[v].id.clone(),
                accept_prob: demo.accept_prob(dg, rg),
                profit,
            });
        }
    }
    for (v, &(start, _, _)) in chosen_req.iter().enumerate() {
        if !chosen_drv.iter().any(|d| d.0 == start) {
            report.warnings.push(format!(
                "request type {} has no feasible edge",
                requests[v].id
            ));
        }
    }

    let instance = Instance {
        drivers,
        request_types: requests,
        edges,
        horizon,
    };
    Ok(Ingested { instance, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn trip(driver: &str, lat: f64, lon: f64, dist: f64) -> TripRecord {
        TripRecord {
            driver_hash: driver.to_string(),
            pickup_datetime: "2013-01-01 19:00:00".into(),
            pickup_lat: lat,
            pickup_lon: lon,
            dropoff_lat: 40.76,
            dropoff_lon: -73.98,
            distance: dist,
        }
    }

    #[test]
    fn single_record() {
        let out = ingest_trips(
            vec![trip("a", 40.75, -73.97, 3.0)],
            &IngestParams::default(),
        )
        .unwrap();
        let inst = &out.instance;
        assert_eq!(
            (
                inst.drivers.len(),
                inst.request_types.len(),
                inst.edges.len()
            ),
            (1, 1, 1)
        );
        assert_eq!(inst.edges[0].profit, 1.0);
        assert!(inst.validate().is_valid());
        assert_eq!(out.report.pickup_bins.get(&300), Some(&1));
    }

    #[test]
    fn distances_normalized_by_max() {
        // same pickup bin, different dropoffs so the request types differ
        let mut a = trip("a", 40.75, -73.97, 2.0);
        let mut b = trip("b", 40.75, -73.97, 4.0);
        a.dropoff_lat = 40.5;
        b.dropoff_lat = 40.9;
        let out = ingest_trips(vec![a, b], &IngestParams::default()).unwrap();
        let mut ws: Vec<f64> = out.instance.edges.iter().map(|e| e.profit).collect();
        ws.sort_by(f64::total_cmp);
        ws.dedup();
        assert_eq!(ws, vec![0.5, 1.0]);
    }

    #[test]
    fn drops_are_counted() {
        let recs = vec![
            trip("a", 41.2, -74.0, 1.0),
            trip("a", f64::NAN, -74.0, 1.0),
            trip("a", 40.75, -74.0, -1.0),
            trip("a", 40.75, -74.0, 1.0),
        ];
        let out = ingest_trips(recs, &IngestParams::default()).unwrap();
        assert_eq!(out.report.dropped_out_of_grid, 1);
        assert_eq!(out.report.dropped_invalid, 2);
        assert_eq!(out.report.records_kept, 1);
    }

    #[test]
    fn empty_after_filtering() {
        let r = ingest_trips(vec![trip("a", 41.2, -74.0, 1.0)], &IngestParams::default());
        assert!(matches!(r, Err(Error::EmptyAfterFiltering)));
        assert!(matches!(
            ingest_trips(Vec::new(), &IngestParams::default()),
            Err(Error::EmptyAfterFiltering)
        ));
    }

    #[test]
    fn group_frequencies_follow_ratios() {
        let n = 4000;
        let recs: Vec<TripRecord> = (0..n)
            .map(|i| {
                let mut r = trip(&format!("driver-{i}"), 40.75, -73.97, 1.0 + (i % 7) as f64);
                r.pickup_datetime = format!("t{i}");
                r
            })
            .collect();
        let out = ingest_trips(recs, &IngestParams::default()).unwrap();
        let nf = n as f64;
        for (count, share) in [
            (out.report.disadvantaged_drivers, 0.75),
            (out.report.disadvantaged_riders, 1.0 / 3.0),
        ] {
            let sigma = libm::sqrt(nf * share * (1.0 - share));
            assert!(
                (count as f64 - nf * share).abs() < 4.0 * sigma,
                "{count} vs {}",
                nf * share
            );
        }
    }
}
