mod common;

use common::{random_instance, TinyShape};
use fairmatch_core::data::{
    generate_synthetic, ingest_trips, GridSpec, IngestParams, SyntheticParams, TripRecord,
};
use fairmatch_core::lp::{check_feasibility, solve_benchmarks, REPORTING_TOLERANCE};
use fairmatch_core::policies::{make_nadap, NAdap, Policy};
use fairmatch_core::simulator::run_monte_carlo;
use fairmatch_core::Graph;
use proptest::prelude::*;

const SHAPE: TinyShape = TinyShape {
    max_drivers: 4,
    max_requests: 4,
    max_horizon: 10,
    max_quota: 3,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn benchmarks_are_feasible(seed in any::<u64>()) {
        let g = Graph::new(&random_instance(seed, &SHAPE)).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        prop_assert!(check_feasibility(&g, &b.x_star, REPORTING_TOLERANCE).is_valid());
        prop_assert!(check_feasibility(&g, &b.y_star, REPORTING_TOLERANCE).is_valid());
    }

    #[test]
    fn nadap_mass_within_mix(seed in any::<u64>(), alpha in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
        let beta = (1.0 - alpha) * frac;
        let g = Graph::new(&random_instance(seed, &SHAPE)).unwrap();
        let b = solve_benchmarks(&g).unwrap();
        let z = make_nadap(&g, &b.x_star, &b.y_star, alpha, beta).unwrap();
        for v in 0..g.num_requests() {
            prop_assert!(z.mass(v) <= alpha + beta + 1e-12);
            prop_assert!(z.entries(v).iter().all(|&(_, p)| p >= 0.0));
        }
    }

    #[test]
    fn estimates_are_consistent(seed in any::<u64>(), which in 0usize..3) {
        let g = Graph::new(&random_instance(seed, &SHAPE)).unwrap();
        let policy = match which {
            0 => {
                let b = solve_benchmarks(&g).unwrap();
                Policy::NAdap(NAdap::new(&g, &b.x_star, &b.y_star, 0.5, 0.5).unwrap())
            }
            1 => Policy::Greedy,
            _ => Policy::Uniform,
        };
        let est = run_monte_carlo(&g, &policy, 50, seed);
        prop_assert!(est.request_rate.iter().all(|&r| est.fairness <= r));
        prop_assert!(est.availability.iter().all(|&p| (0.0..=1.0).contains(&p)));
        for u in 0..g.num_drivers() {
            prop_assert_eq!(est.availability(u, 0), 1.0);
            for t in 1..g.horizon() {
                prop_assert!(est.availability(u, t) <= est.availability(u, t - 1));
            }
        }
    }

    #[test]
    fn synthetic_instances_are_valid(
        seed in any::<u64>(),
        drivers in 1usize..20,
        requests in 1usize..20,
        extra in 0u32..50,
        edge_prob in 0.0f64..=1.0,
        quota in 1u32..4,
    ) {
        let params = SyntheticParams {
            num_drivers: drivers,
            num_request_types: requests,
            horizon: requests as u32 + extra,
            edge_prob,
            quota,
            ..Default::default()
        };
        let inst = generate_synthetic(&params, seed).unwrap();
        prop_assert!(inst.validate().is_valid());
        prop_assert_eq!(inst.rate_sum(), params.horizon as f64);
    }

    #[test]
    fn grid_bins_are_in_range(lat in 40.0f64..41.5, lon in -75.5f64..-72.5) {
        let g = GridSpec::default();
        let inside = (40.4..=40.95).contains(&lat) && (-75.0..=-73.0).contains(&lon);
        match g.bin(lat, lon) {
            Some(b) => prop_assert!(inside && b < g.num_bins()),
            None => prop_assert!(!inside),
        }
    }

    #[test]
    fn ingestion_is_valid_and_order_free(
        trips in prop::collection::vec(
            (0u8..30, 40.4f64..40.95, -74.1f64..-73.7, 40.4f64..40.95, -74.1f64..-73.7, 0.0f64..20.0),
            1..80,
        ),
        seed in any::<u64>(),
        rotate in any::<prop::sample::Index>(),
    ) {
        let records: Vec<TripRecord> = trips
            .iter()
            .enumerate()
            .map(|(i, &(d, plat, plon, dlat, dlon, dist))| TripRecord {
                driver_hash: format!("drv{d}"),
                pickup_datetime: format!("2013-01-01 19:{:02}:00", i % 60),
                pickup_lat: plat,
                pickup_lon: plon,
                dropoff_lat: dlat,
                dropoff_lon: dlon,
                distance: dist,
            })
            .collect();
        let params = IngestParams { target_drivers: 6, target_requests: 5, seed, ..Default::default() };
        let out = ingest_trips(records.clone(), &params).unwrap();
        prop_assert!(out.instance.validate().is_valid());

        let mut shuffled = records;
        let k = rotate.index(shuffled.len());
        shuffled.rotate_left(k);
        shuffled.reverse();
        let again = ingest_trips(shuffled, &params).unwrap();
        prop_assert_eq!(out.instance, again.instance);
    }
}
