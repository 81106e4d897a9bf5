//! Energy cost model: node visit cost, collection-path cost, delivery cost and
//! the fleet objective.
//!
//! Times are minutes since the UAV took off this round, energies are in
//! abstract energy units. `alpha` and `beta` carry units of energy per minute
//! so a visit cost is an energy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NodeRef, SinkId, SinkNode};
use crate::planner::RoundResult;
use crate::serde_ext::threshold;

/// Which visit variables are hard-bounded rather than only penalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    #[default]
    Free,
    LateBounded,
    WaitBounded,
    BothBounded,
}

impl Scenario {
    pub fn from_bounds(wait: bool, late: bool) -> Self {
        match (wait, late) {
            (false, false) => Scenario::Free,
            (false, true) => Scenario::LateBounded,
            (true, false) => Scenario::WaitBounded,
            (true, true) => Scenario::BothBounded,
        }
    }

    pub fn bounds_wait(self) -> bool {
        matches!(self, Scenario::WaitBounded | Scenario::BothBounded)
    }

    pub fn bounds_late(self) -> bool {
        matches!(self, Scenario::LateBounded | Scenario::BothBounded)
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "free" => Ok(Scenario::Free),
            "late" | "late_bounded" => Ok(Scenario::LateBounded),
            "wait" | "waiting" | "wait_bounded" => Ok(Scenario::WaitBounded),
            "both" | "both_bounded" => Ok(Scenario::BothBounded),
            other => Err(Error::Config(format!("unknown scenario {other:?}"))),
        }
    }
}

fn infinite() -> f64 {
    f64::INFINITY
}

fn yes() -> bool {
    true
}

/// Waiting and lateness thresholds of one sink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeThresholds {
    #[serde(with = "threshold", default = "infinite")]
    pub wait: f64,
    #[serde(with = "threshold", default = "infinite")]
    pub late: f64,
}

impl Default for NodeThresholds {
    fn default() -> Self {
        NodeThresholds { wait: f64::INFINITY, late: f64::INFINITY }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub scenario: Scenario,
    #[serde(with = "threshold", default = "infinite")]
    pub default_wait: f64,
    #[serde(with = "threshold", default = "infinite")]
    pub default_late: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<SinkId, NodeThresholds>,
    /// Whether time spent waiting at a sink delays all later arrivals.
    #[serde(default = "yes")]
    pub wait_advances_clock: bool,
}

impl Default for CostParams {
    /// alpha = beta = 0.5, gamma = 1, unconstrained.
    fn default() -> Self {
        CostParams::new(0.5, 0.5, 1.0)
    }
}

impl CostParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        CostParams {
            alpha,
            beta,
            gamma,
            scenario: Scenario::Free,
            default_wait: f64::INFINITY,
            default_late: f64::INFINITY,
            overrides: BTreeMap::new(),
            wait_advances_clock: true,
        }
    }

    pub fn with_wait_threshold(mut self, wait: f64) -> Self {
        self.default_wait = wait;
        self.scenario = self.derived_scenario();
        self
    }

    pub fn with_late_threshold(mut self, late: f64) -> Self {
        self.default_late = late;
        self.scenario = self.derived_scenario();
        self
    }

    pub fn with_override(mut self, sink: SinkId, thresholds: NodeThresholds) -> Self {
        self.overrides.insert(sink, thresholds);
        self.scenario = self.derived_scenario();
        self
    }

    /// The scenario implied by which thresholds are finite.
    pub fn derived_scenario(&self) -> Scenario {
        let wait = self.default_wait.is_finite() || self.overrides.values().any(|t| t.wait.is_finite());
        let late = self.default_late.is_finite() || self.overrides.values().any(|t| t.late.is_finite());
        Scenario::from_bounds(wait, late)
    }

    /// Effective thresholds for a sink.
    pub fn thresholds_for(&self, sink: SinkId) -> NodeThresholds {
        self.overrides
            .get(&sink)
            .copied()
            .unwrap_or(NodeThresholds { wait: self.default_wait, late: self.default_late })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be a non-negative number, got {v}")));
            }
        }
        let all = std::iter::once(NodeThresholds { wait: self.default_wait, late: self.default_late })
            .chain(self.overrides.values().copied());
        for t in all {
            if !(t.wait >= 0.0) || !(t.late >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "thresholds must be non-negative or infinite, got W={} L={}",
                    t.wait, t.late
                )));
            }
        }
        let derived = self.derived_scenario();
        if derived != self.scenario {
            return Err(Error::InvalidParameter(format!(
                "scenario {:?} does not match the finite thresholds (implies {:?})",
                self.scenario, derived
            )));
        }
        Ok(())
    }
}

/// Outcome of one UAV arriving at one sink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisitOutcome {
    pub arrival_time: f64,
    pub wait: f64,
    pub lateness: f64,
    pub node_cost: f64,
}

fn unit_step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Visit cost of a sink for a given arrival time, travel excluded:
/// `alpha * w * u(w) + beta * l * u(l) + gamma * e`.
pub fn visit_cost(node: &SinkNode, arrival_time: f64, params: &CostParams) -> VisitOutcome {
    let wait = (node.revisit_deadline - arrival_time).max(0.0);
    let lateness = (arrival_time - node.revisit_deadline).max(0.0);
    let node_cost = params.alpha * wait * unit_step(wait)
        + params.beta * lateness * unit_step(lateness)
        + params.gamma * node.collection_energy;
    VisitOutcome { arrival_time, wait, lateness, node_cost }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Energy of the first hop out of the start base.
    pub launch_energy: f64,
    /// Sum of visit costs over collected sinks.
    pub node_costs: f64,
    /// Energy of all later collection hops, transit included.
    pub travel_energy: f64,
    pub delivery_energy: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(launch_energy: f64, node_costs: f64, travel_energy: f64, delivery_energy: f64) -> Self {
        CostBreakdown {
            launch_energy,
            node_costs,
            travel_energy,
            delivery_energy,
            total: launch_energy + node_costs + travel_energy + delivery_energy,
        }
    }

    /// Collection part only, `C(p)`.
    pub fn collection(&self) -> f64 {
        self.launch_energy + self.node_costs + self.travel_energy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegKind {
    /// Hop ending at a sink whose data is collected.
    Collect,
    /// Hop through an already visited sink.
    Transit,
    /// Hop on the way to the delivery base station.
    Delivery,
}

/// One edge traversal of a UAV route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub from: NodeRef,
    pub to: NodeRef,
    pub kind: LegKind,
    pub arrival: f64,
    pub wait: f64,
    pub late: f64,
    pub edge_energy: f64,
    pub node_cost: f64,
}

impl Leg {
    pub fn energy(&self) -> f64 {
        self.edge_energy + self.node_cost
    }
}

pub(crate) struct RouteEval {
    pub breakdown: CostBreakdown,
    pub visits: Vec<VisitOutcome>,
    pub legs: Vec<Leg>,
    pub clock: f64,
}

/// Walks a route of `(node index, collect?)` steps starting at a base
/// station. Each consecutive pair must be joined by a move edge.
pub(crate) fn evaluate_route(
    net: &Network,
    route: &[(usize, bool)],
    speed: f64,
    params: &CostParams,
) -> Result<RouteEval> {
    let Some(&(start, _)) = route.first() else {
        return Err(Error::InvalidPath("empty path".into()));
    };
    if net.is_sink_index(start) {
        return Err(Error::InvalidPath(format!("path starts at sink {}, not a base station", net.node_ref(start))));
    }
    let mut clock = 0.0;
    let mut launch = 0.0;
    let mut travel = 0.0;
    let mut node_costs = 0.0;
    let mut visits = Vec::new();
    let mut legs = Vec::with_capacity(route.len().saturating_sub(1));
    for (k, pair) in route.windows(2).enumerate() {
        let ((a, _), (b, collect)) = (pair[0], pair[1]);
        let link = net.link(a, b).ok_or_else(|| {
            Error::InvalidPath(format!("no UAV edge between {} and {}", net.node_ref(a), net.node_ref(b)))
        })?;
        if !net.is_sink_index(b) {
            return Err(Error::InvalidPath(format!("collection path passes through base {}", net.node_ref(b))));
        }
        if k == 0 {
            launch = link.energy;
        } else {
            travel += link.energy;
        }
        let arrival = clock + link.length / speed;
        let mut leg = Leg {
            from: net.node_ref(a),
            to: net.node_ref(b),
            kind: LegKind::Transit,
            arrival,
            wait: 0.0,
            late: 0.0,
            edge_energy: link.energy,
            node_cost: 0.0,
        };
        clock = arrival;
        if collect {
            let v = visit_cost(net.sink(b), arrival, params);
            node_costs += v.node_cost;
            if params.wait_advances_clock {
                clock += v.wait;
            }
            leg.kind = LegKind::Collect;
            leg.wait = v.wait;
            leg.late = v.lateness;
            leg.node_cost = v.node_cost;
            visits.push(v);
        }
        legs.push(leg);
    }
    Ok(RouteEval { breakdown: CostBreakdown::new(launch, node_costs, travel, 0.0), visits, legs, clock })
}

/// Collection cost `C(p)` of a path `[base, s1, ..., sk]` flown at `speed`
/// metres per minute. Every sink on the path is collected.
pub fn collection_cost(
    net: &Network,
    path: &[NodeRef],
    speed: f64,
    params: &CostParams,
) -> Result<(CostBreakdown, Vec<VisitOutcome>)> {
    if !(speed > 0.0) {
        return Err(Error::InvalidParameter(format!("speed must be positive, got {speed}")));
    }
    if path.len() < 2 {
        return Err(Error::InvalidPath("collection path needs a base station and at least one sink".into()));
    }
    let mut route = Vec::with_capacity(path.len());
    let mut seen = std::collections::HashSet::new();
    for (k, node) in path.iter().enumerate() {
        let idx = net.require(node)?;
        if k > 0 && !seen.insert(idx) {
            return Err(Error::InvalidPath(format!("sink {node} repeats on the collection path")));
        }
        route.push((idx, k > 0));
    }
    let eval = evaluate_route(net, &route, speed, params)?;
    Ok((eval.breakdown, eval.visits))
}

/// A delivery route from a sink to its nearest base station.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivery {
    pub path: Vec<NodeRef>,
    pub energy: f64,
    pub length: f64,
}

/// Shortest route (by energy) from `from` to any base station, never passing
/// through a base on the way. Ties go to the base listed first.
pub(crate) fn nearest_base_route(net: &Network, from: usize, ops: &mut u64) -> Option<(Vec<usize>, f64, f64)> {
    let sp = net.dijkstra(from, |i| net.is_sink_index(i), ops);
    let n = net.sink_count();
    let best = (n..net.node_count())
        .filter(|&b| sp.dist[b].is_finite())
        .min_by(|&x, &y| sp.dist[x].total_cmp(&sp.dist[y]).then(x.cmp(&y)))?;
    Some((sp.path_to(best)?, sp.dist[best], sp.length[best]))
}

/// Delivery cost `E(p)` from the last collected sink: the minimum-energy UAV
/// path to the nearest base station. Visited sinks may be crossed; no visit
/// costs accrue on the way.
pub fn delivery_cost(net: &Network, last_sink: &NodeRef) -> Result<Delivery> {
    let idx = net.require(last_sink)?;
    if !net.is_sink_index(idx) {
        return Err(Error::InvalidPath(format!("delivery must start at a sink, got {last_sink}")));
    }
    let (path, energy, length) = nearest_base_route(net, idx, &mut 0)
        .ok_or_else(|| Error::NoPath { from: last_sink.clone(), to: NodeRef::base("<any base>") })?;
    Ok(Delivery { path: path.into_iter().map(|i| net.node_ref(i)).collect(), energy, length })
}

/// Fleet objective: the sum of every plan's collection and delivery energy.
pub fn objective_z(round: &RoundResult) -> f64 {
    round.plans.iter().map(|p| p.breakdown.total).sum()
}
