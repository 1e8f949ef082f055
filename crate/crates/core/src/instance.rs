//! Problem data model: drivers, request types, probabilistic weighted edges
//! and the horizon.
//!
//! [`Instance`] is the serializable form, keyed by string ids. [`Graph`] is
//! the validated, index-resolved form that the LP builders, policies and the
//! simulator work on. Edges are identified by their position in
//! [`Instance::edges`] everywhere in the crate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::validation::ValidationReport;
use crate::{Error, Result};

/// Absolute tolerance on `Σ_v r_v = T`.
pub const RATE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Driver {
    pub id: String,
    /// Number of cancellations after which the driver is deactivated.
    pub quota: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestType {
    pub id: String,
    /// Expected number of arrivals over the horizon.
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    #[serde(rename = "u")]
    pub driver: String,
    #[serde(rename = "v")]
    pub request_type: String,
    /// Probability that the driver accepts an assignment along this edge.
    #[serde(rename = "p")]
    pub accept_prob: f64,
    #[serde(rename = "w")]
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub drivers: Vec<Driver>,
    pub request_types: Vec<RequestType>,
    pub edges: Vec<Edge>,
    pub horizon: u32,
}

impl Instance {
    /// Checks every invariant of the model. Errors and warnings are both
    /// recorded; the instance is usable iff the report has no errors.
    pub fn validate(&self) -> ValidationReport {
        validate_instance(self)
    }

    /// Copy of this instance with every driver's quota set to `quota`.
    pub fn with_uniform_quota(&self, quota: u32) -> Instance {
        let mut inst = self.clone();
        for d in &mut inst.drivers {
            d.quota = quota;
        }
        inst
    }

    pub fn rate_sum(&self) -> f64 {
        self.request_types.iter().map(|r| r.rate).sum()
    }
}

/// Lists every violated invariant of `inst`. Request types without any edge
/// are reported as warnings.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let mut report = ValidationReport::new();

    if inst.horizon == 0 {
        report.error("horizon", "", "horizon T must be positive");
    }

    let mut driver_ids = BTreeSet::new();
    for d in &inst.drivers {
        if !driver_ids.insert(d.id.as_str()) {
            report.error(
                "duplicate-driver",
                d.id.clone(),
                "driver id appears more than once",
            );
        }
        if d.quota == 0 {
            report.error(
                "quota",
                d.id.clone(),
                "cancellation quota must be at least 1",
            );
        }
    }

    let mut request_ids = BTreeSet::new();
    for r in &inst.request_types {
        if !request_ids.insert(r.id.as_str()) {
            report.error(
                "duplicate-request-type",
                r.id.clone(),
                "request type id appears more than once",
            );
        }
        if !(r.rate.is_finite() && r.rate > 0.0) {
            report.error(
                "rate",
                r.id.clone(),
                format!("arrival rate {} must be positive", r.rate),
            );
        }
    }

    let rate_sum = inst.rate_sum();
    if !(libm::fabs(rate_sum - inst.horizon as f64) <= RATE_SUM_TOLERANCE) {
        report.error(
            "rate-sum",
            "",
            format!(
                "rates sum to {} but horizon T is {} (rates ≠ T)",
                rate_sum, inst.horizon
            ),
        );
    }

    let mut pairs = BTreeSet::new();
    let mut request_degree: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &inst.edges {
        let label = edge_label(e);
        if !driver_ids.contains(e.driver.as_str()) {
            report.error(
                "unknown-driver",
                label.clone(),
                "edge references an unknown driver",
            );
        }
        if !request_ids.contains(e.request_type.as_str()) {
            report.error(
                "unknown-request-type",
                label.clone(),
                "edge references an unknown request type",
            );
        }
        if !(e.accept_prob > 0.0 && e.accept_prob <= 1.0) {
            report.error(
                "accept-prob",
                label.clone(),
                format!("p_f = {} out of (0,1]", e.accept_prob),
            );
        }
        if !(e.profit.is_finite() && e.profit >= 0.0) {
            report.error(
                "profit",
                label.clone(),
                format!("profit w_f = {} must be ≥ 0", e.profit),
            );
        }
        if !pairs.insert((e.driver.as_str(), e.request_type.as_str())) {
            report.error(
                "duplicate-edge",
                label,
                "(driver, request type) pair appears twice",
            );
        }
        *request_degree.entry(e.request_type.as_str()).or_default() += 1;
    }

    for r in &inst.request_types {
        if !request_degree.contains_key(r.id.as_str()) {
            report.warning(
                "isolated-request-type",
                r.id.clone(),
                "request type has no incident edge",
            );
        }
    }

    report
}

fn edge_label(e: &Edge) -> String {
    format!("({}, {})", e.driver, e.request_type)
}

/// Index-resolved edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRef {
    pub driver: usize,
    pub request: usize,
    pub accept_prob: f64,
    pub profit: f64,
}

/// A validated instance with integer indices and adjacency lists `E_u`, `E_v`.
#[derive(Debug, Clone)]
pub struct Graph {
    instance: Instance,
    edges: Vec<EdgeRef>,
    by_driver: Vec<Vec<usize>>,
    by_request: Vec<Vec<usize>>,
}

impl Graph {
    /// Resolves ids to indices. Fails with the validation report if the
    /// instance has any error-level issue.
    pub fn new(instance: &Instance) -> Result<Self> {
        let report = validate_instance(instance);
        if !report.is_valid() {
            return Err(Error::InvalidInstance(report));
        }
        let driver_index: BTreeMap<&str, usize> = instance
            .drivers
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.as_str(), i))
            .collect();
        let request_index: BTreeMap<&str, usize> = instance
            .request_types
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.as_str(), i))
            .collect();

        let mut by_driver = alloc::vec![Vec::new(); instance.drivers.len()];
        let mut by_request = alloc::vec![Vec::new(); instance.request_types.len()];
        let edges = instance
            .edges
            .iter()
            .enumerate()
            .map(|(f, e)| {
                let driver = driver_index[e.driver.as_str()];
                let request = request_index[e.request_type.as_str()];
                by_driver[driver].push(f);
                by_request[request].push(f);
                EdgeRef {
                    driver,
                    request,
                    accept_prob: e.accept_prob,
                    profit: e.profit,
                }
            })
            .collect();

        Ok(Self {
            instance: instance.clone(),
            edges,
            by_driver,
            by_request,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn num_drivers(&self) -> usize {
        self.by_driver.len()
    }

    pub fn num_requests(&self) -> usize {
        self.by_request.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn horizon(&self) -> u32 {
        self.instance.horizon
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn edge(&self, f: usize) -> &EdgeRef {
        &self.edges[f]
    }

    /// `E_u`: edge indices incident to driver `u`.
    pub fn driver_edges(&self, u: usize) -> &[usize] {
        &self.by_driver[u]
    }

    /// `E_v`: edge indices incident to request type `v`.
    pub fn request_edges(&self, v: usize) -> &[usize] {
        &self.by_request[v]
    }

    pub fn quota(&self, u: usize) -> u32 {
        self.instance.drivers[u].quota
    }

    pub fn rate(&self, v: usize) -> f64 {
        self.instance.request_types[v].rate
    }

    pub fn driver_id(&self, u: usize) -> &str {
        &self.instance.drivers[u].id
    }

    pub fn request_id(&self, v: usize) -> &str {
        &self.instance.request_types[v].id
    }
}

/// The one-driver star instance used to show the hardness cap for
/// non-adaptive policies.
///
/// One driver `u` with quota 1 and request types `v0..vK`, all with unit
/// profit. `p = 1` on `(u, v0)` and `p = eps` on every other edge. Rates are
/// 1 each and `T = K + 1`; a horizon override rescales all rates uniformly
/// to `T / (K + 1)`.
pub fn build_star_instance(k: u32, eps: f64, horizon_override: Option<u32>) -> Result<Instance> {
    if k == 0 {
        return Err(Error::param("k", "need at least one low-probability leaf"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param("eps", format!("{eps} is outside (0,1]")));
    }
    if horizon_override == Some(0) {
        return Err(Error::param("horizon", "must be positive"));
    }
    let leaves = k as usize + 1;
    let horizon = horizon_override.unwrap_or(k + 1);
    let rate = match horizon_override {
        Some(t) => t as f64 / leaves as f64,
        None => 1.0,
    };

    let drivers = alloc::vec![Driver {
        id: "u".into(),
        quota: 1,
        group: None
    }];
    let request_types = (0..leaves)
        .map(|j| RequestType {
            id: format!("v{j}"),
            rate,
            group: None,
        })
        .collect();
    let edges = (0..leaves)
        .map(|j| Edge {
            driver: "u".into(),
            request_type: format!("v{j}"),
            accept_prob: if j == 0 { 1.0 } else { eps },
            profit: 1.0,
        })
        .collect();

    Ok(Instance {
        drivers,
        request_types,
        edges,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn single() -> Instance {
        Instance {
            drivers: vec![Driver {
                id: "a".into(),
                quota: 1,
                group: None,
            }],
            request_types: vec![RequestType {
                id: "x".into(),
                rate: 1.0,
                group: None,
            }],
            edges: vec![Edge {
                driver: "a".into(),
                request_type: "x".into(),
                accept_prob: 1.0,
                profit: 0.7,
            }],
            horizon: 1,
        }
    }

    #[test]
    fn valid_single_edge_has_empty_report() {
        assert!(validate_instance(&single()).is_empty());
    }

    #[test]
    fn rate_sum_mismatch_is_reported() {
        let mut inst = single();
        inst.request_types[0].rate = 359.0;
        inst.horizon = 360;
        let report = validate_instance(&inst);
        assert!(report.has_kind("rate-sum"));
        assert!(!report.is_valid());
    }

    #[test]
    fn zero_accept_prob_is_reported() {
        let mut inst = single();
        inst.edges[0].accept_prob = 0.0;
        let report = validate_instance(&inst);
        assert!(report.has_kind("accept-prob"));
        assert_eq!(report.errors().next().unwrap().entity, "(a, x)");
    }

    #[test]
    fn duplicate_edges_and_dangling_ids_are_errors() {
        let mut inst = single();
        inst.edges.push(inst.edges[0].clone());
        inst.edges.push(Edge {
            driver: "ghost".into(),
            request_type: "x".into(),
            accept_prob: 0.5,
            profit: 0.0,
        });
        let report = validate_instance(&inst);
        assert!(report.has_kind("duplicate-edge"));
        assert!(report.has_kind("unknown-driver"));
        assert!(Graph::new(&inst).is_err());
    }

    #[test]
    fn isolated_request_type_is_only_a_warning() {
        let mut inst = single();
        inst.request_types[0].rate = 0.5;
        inst.request_types.push(RequestType {
            id: "y".into(),
            rate: 0.5,
            group: None,
        });
        let report = validate_instance(&inst);
        assert!(report.is_valid());
        assert_eq!(report.warnings().count(), 1);
        assert!(Graph::new(&inst).is_ok());
    }

    #[test]
    fn validation_is_idempotent() {
        let mut inst = single();
        inst.edges[0].profit = -1.0;
        assert_eq!(validate_instance(&inst), validate_instance(&inst));
    }

    #[test]
    fn star_fixture_shape() {
        let inst = build_star_instance(10, 0.01, None).unwrap();
        assert_eq!(inst.drivers.len(), 1);
        assert_eq!(inst.request_types.len(), 11);
        assert_eq!(inst.horizon, 11);
        assert_eq!(inst.edges[0].accept_prob, 1.0);
        assert!(inst.edges[1..]
            .iter()
            .all(|e| e.accept_prob == 0.01 && e.profit == 1.0));
        assert!(validate_instance(&inst).is_empty());

        let g = Graph::new(&inst).unwrap();
        assert_eq!(g.driver_edges(0).len(), 11);
        assert!((0..11).all(|v| g.request_edges(v).len() == 1));
    }

    #[test]
    fn star_horizon_override_rescales_rates() {
        let inst = build_star_instance(10, 0.01, Some(10_000)).unwrap();
        assert_eq!(inst.horizon, 10_000);
        for r in &inst.request_types {
            assert_eq!(r.rate, 10_000.0 / 11.0);
        }
        let mut total = 0.0;
        for r in &inst.request_types {
            total += r.rate;
        }
        assert!((total - 10_000.0).abs() < 1e-9);
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn star_near_symmetric_case() {
        let inst = build_star_instance(1, 1.0 - 1e-9, None).unwrap();
        assert_eq!(inst.edges.len(), 2);
        assert!((inst.edges[0].accept_prob - inst.edges[1].accept_prob).abs() < 1e-8);
    }

    #[test]
    fn star_rejects_bad_parameters() {
        assert!(build_star_instance(0, 0.1, None).is_err());
        assert!(build_star_instance(3, 0.0, None).is_err());
        assert!(build_star_instance(3, 1.5, None).is_err());
    }
}
