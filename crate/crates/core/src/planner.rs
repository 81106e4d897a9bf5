//! Cooperative greedy planning of one visitation round.
//!
//! Every iteration, each UAV proposes the sink with the least marginal
//! collection cost (hop energy plus the visit cost at its projected arrival).
//! When several UAVs propose the same sink it goes to the cheapest proposer;
//! the others propose again next iteration. Once no UAV can extend its path,
//! every UAV that collected something flies to its nearest base station.
//!
//! A UAV with no feasible neighbouring sink left routes through already
//! visited sinks to reach a remaining one ("stalled" routing). On a complete
//! sink graph that never happens in the unconstrained scenario.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::cost::{
    self, evaluate_route, nearest_base_route, CostBreakdown, CostParams, Leg, LegKind, Scenario, VisitOutcome,
};
use crate::error::{Error, Result};
use crate::network::{Network, NodeRef, SinkId, SinkNode};

pub type UavId = u32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uav {
    pub id: UavId,
    /// Metres per minute.
    pub speed: f64,
    /// Base station the UAV takes off from this round.
    pub home_base: String,
    /// Energy accumulated over past rounds, for reporting.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub energy_spent: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl Uav {
    pub fn new(id: UavId, speed: f64, home_base: impl Into<String>) -> Self {
        Uav { id, speed, home_base: home_base.into(), energy_spent: 0.0 }
    }
}

/// One UAV's result for a round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub uav: UavId,
    /// Start base followed by the collected sinks in visiting order.
    pub collection_path: Vec<NodeRef>,
    /// Last collected sink to the delivery base; just the start base when
    /// nothing was collected.
    pub delivery_path: Vec<NodeRef>,
    /// Every edge flown, transit and delivery hops included.
    pub legs: Vec<Leg>,
    /// Visit outcomes aligned with `collection_path[1..]`.
    pub arrivals: Vec<VisitOutcome>,
    pub breakdown: CostBreakdown,
}

impl Plan {
    pub fn start_base(&self) -> &NodeRef {
        &self.collection_path[0]
    }

    pub fn delivery_base(&self) -> &NodeRef {
        self.delivery_path.last().expect("delivery path is never empty")
    }

    pub fn sinks(&self) -> impl Iterator<Item = SinkId> + '_ {
        self.collection_path[1..].iter().map(|n| match n {
            NodeRef::Sink(id) => *id,
            NodeRef::Base(_) => unreachable!("collection path holds sinks after its base"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundResult {
    /// One plan per UAV, in fleet order.
    pub plans: Vec<Plan>,
    pub unvisited: BTreeSet<SinkId>,
    pub total_z: f64,
    /// Select/resolve iterations executed.
    pub iterations: usize,
    /// Candidate evaluations, conflict comparisons and shortest-path
    /// relaxations performed while selecting.
    pub operations: u64,
}

impl RoundResult {
    pub fn plan_for(&self, uav: UavId) -> Option<&Plan> {
        self.plans.iter().find(|p| p.uav == uav)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    /// Reject fleets that put more UAVs on a base than its capacity.
    pub enforce_capacity: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { enforce_capacity: true }
    }
}

/// Whether the implied waiting and lateness respect the sink's thresholds
/// under the active scenario.
pub fn feasible_under_thresholds(node: &SinkNode, projected_arrival: f64, params: &CostParams) -> bool {
    let t = params.thresholds_for(node.id);
    let wait = (node.revisit_deadline - projected_arrival).max(0.0);
    let late = (projected_arrival - node.revisit_deadline).max(0.0);
    (!params.scenario.bounds_wait() || wait <= t.wait) && (!params.scenario.bounds_late() || late <= t.late)
}

/// Least-cost feasible neighbouring sink among `remaining` for a UAV at
/// `position` with the given clock. Ties go to the lower sink id.
pub fn select_next(
    net: &Network,
    position: &NodeRef,
    clock: f64,
    speed: f64,
    remaining: &BTreeSet<SinkId>,
    params: &CostParams,
) -> Result<Option<(SinkId, f64)>> {
    let pos = net.require(position)?;
    let mut mask = vec![false; net.sink_count()];
    for id in remaining {
        if let Some(i) = net.index_of(&NodeRef::Sink(*id)) {
            mask[i] = true;
        }
    }
    Ok(best_neighbor(net, pos, clock, speed, &mask, params, &mut 0).map(|(i, c)| (net.sink(i).id, c)))
}

fn best_neighbor(
    net: &Network,
    pos: usize,
    clock: f64,
    speed: f64,
    remaining: &[bool],
    params: &CostParams,
    ops: &mut u64,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for link in net.neighbors(pos) {
        if !net.is_sink_index(link.to) || !remaining[link.to] {
            continue;
        }
        *ops += 1;
        let node = net.sink(link.to);
        let arrival = clock + link.length / speed;
        if !feasible_under_thresholds(node, arrival, params) {
            continue;
        }
        let c = link.energy + cost::visit_cost(node, arrival, params).node_cost;
        let better = match best {
            None => true,
            Some((b, bc)) => c < bc || (c == bc && node.id < net.sink(b).id),
        };
        if better {
            best = Some((link.to, c));
        }
    }
    best
}

/// Assigns each contested sink to the proposer with the least cost, ties to
/// the lower UAV id. Returns sink → UAV.
pub fn resolve_conflicts(choices: &BTreeMap<UavId, (SinkId, f64)>) -> BTreeMap<SinkId, UavId> {
    let mut best: BTreeMap<SinkId, (f64, UavId)> = BTreeMap::new();
    for (&uav, &(sink, c)) in choices {
        best.entry(sink)
            .and_modify(|cur| {
                if c < cur.0 || (c == cur.0 && uav < cur.1) {
                    *cur = (c, uav);
                }
            })
            .or_insert((c, uav));
    }
    best.into_iter().map(|(s, (_, u))| (s, u)).collect()
}

struct Agent {
    pos: usize,
    clock: f64,
    speed: f64,
    id: UavId,
    route: Vec<(usize, bool)>,
}

struct Proposal {
    agent: usize,
    sink: usize,
    cost: f64,
    /// Intermediate (transit) nodes between the current position and `sink`.
    via: Vec<usize>,
}

fn propose(
    net: &Network,
    agent: &Agent,
    remaining: &[bool],
    visited: &[bool],
    params: &CostParams,
    ops: &mut u64,
) -> Option<(usize, f64, Vec<usize>)> {
    if let Some((sink, c)) = best_neighbor(net, agent.pos, agent.clock, agent.speed, remaining, params, ops) {
        return Some((sink, c, Vec::new()));
    }
    // stalled: reach a remaining sink through visited sinks only
    let sp = net.dijkstra(agent.pos, |i| net.is_sink_index(i) && visited[i], ops);
    let mut best: Option<(usize, f64, Vec<usize>)> = None;
    for (s, &open) in remaining.iter().enumerate() {
        if !open || !sp.dist[s].is_finite() {
            continue;
        }
        *ops += 1;
        let path = sp.path_to(s)?;
        let mut clock = agent.clock;
        for w in path.windows(2) {
            clock += net.link(w[0], w[1]).expect("path follows edges").length / agent.speed;
        }
        let node = net.sink(s);
        if !feasible_under_thresholds(node, clock, params) {
            continue;
        }
        let c = sp.dist[s] + cost::visit_cost(node, clock, params).node_cost;
        let better = match &best {
            None => true,
            Some((b, bc, _)) => c < *bc || (c == *bc && node.id < net.sink(*b).id),
        };
        if better {
            best = Some((s, c, path[1..path.len() - 1].to_vec()));
        }
    }
    best
}

/// Drops remaining sinks that some UAV could reach now but none could reach
/// within the thresholds. A UAV's projection uses the direct edge when there
/// is one and otherwise the transit route through visited sinks. Returns the
/// number of sinks dropped.
fn prune_infeasible(
    net: &Network,
    agents: &[Agent],
    remaining: &mut [bool],
    visited: &[bool],
    params: &CostParams,
    ops: &mut u64,
) -> usize {
    let n = net.sink_count();
    let mut reachable = vec![false; n];
    let mut feasible = vec![false; n];
    for agent in agents {
        let sp = net.dijkstra(agent.pos, |i| net.is_sink_index(i) && visited[i], ops);
        for s in (0..n).filter(|&s| remaining[s]) {
            let length = match net.link(agent.pos, s) {
                Some(link) => link.length,
                None if sp.length[s].is_finite() => sp.length[s],
                None => continue,
            };
            *ops += 1;
            reachable[s] = true;
            feasible[s] |= feasible_under_thresholds(net.sink(s), agent.clock + length / agent.speed, params);
        }
    }
    let mut dropped = 0;
    for s in 0..n {
        if remaining[s] && reachable[s] && !feasible[s] {
            remaining[s] = false;
            dropped += 1;
        }
    }
    dropped
}

pub(crate) fn validate_fleet(net: &Network, fleet: &[Uav], opts: &PlanOptions) -> Result<Vec<usize>> {
    if fleet.is_empty() {
        return Err(Error::Config("fleet is empty".into()));
    }
    let mut ids = BTreeSet::new();
    let mut load: HashMap<usize, u32> = HashMap::new();
    let mut homes = Vec::with_capacity(fleet.len());
    for u in fleet {
        if !ids.insert(u.id) {
            return Err(Error::Config(format!("duplicate UAV id {}", u.id)));
        }
        if !(u.speed > 0.0) || !u.speed.is_finite() {
            return Err(Error::Config(format!("UAV {} has invalid speed {}", u.id, u.speed)));
        }
        let home = net
            .index_of(&NodeRef::base(u.home_base.as_str()))
            .filter(|&i| !net.is_sink_index(i))
            .ok_or_else(|| Error::Config(format!("UAV {} references unknown base station {:?}", u.id, u.home_base)))?;
        if net.sink_count() > 0 && net.degree(home) == 0 {
            return Err(Error::Config(format!("base station {} has no UAV edge", u.home_base)));
        }
        *load.entry(home).or_default() += 1;
        homes.push(home);
    }
    if opts.enforce_capacity {
        for (&base, &count) in &load {
            let cap = net.base(base).capacity;
            if count > cap {
                return Err(Error::Config(format!(
                    "{count} UAVs start at base station {} whose capacity is {cap}",
                    net.base(base).id
                )));
            }
        }
    }
    Ok(homes)
}

/// Plans one round with default options (capacity enforced).
pub fn plan_round(net: &Network, fleet: &[Uav], params: &CostParams) -> Result<RoundResult> {
    plan_round_with(net, fleet, params, &PlanOptions::default())
}

pub fn plan_round_with(net: &Network, fleet: &[Uav], params: &CostParams, opts: &PlanOptions) -> Result<RoundResult> {
    params.validate()?;
    let homes = validate_fleet(net, fleet, opts)?;

    let mut agents: Vec<Agent> = fleet
        .iter()
        .zip(&homes)
        .map(|(u, &home)| Agent { pos: home, clock: 0.0, speed: u.speed, id: u.id, route: vec![(home, false)] })
        .collect();
    let mut remaining = vec![true; net.sink_count()];
    let mut visited = vec![false; net.sink_count()];
    let mut left = net.sink_count();
    let bound = net.sink_count() + fleet.len() + 1;
    let mut iterations = 0;
    let mut ops = 0u64;

    while left > 0 {
        iterations += 1;
        if iterations > bound {
            return Err(Error::IterationBound(bound));
        }
        if params.scenario != Scenario::Free {
            left -= prune_infeasible(net, &agents, &mut remaining, &visited, params, &mut ops);
            if left == 0 {
                break;
            }
        }
        let proposals: Vec<Proposal> = agents
            .iter()
            .enumerate()
            .filter_map(|(k, a)| {
                propose(net, a, &remaining, &visited, params, &mut ops).map(|(sink, cost, via)| Proposal {
                    agent: k,
                    sink,
                    cost,
                    via,
                })
            })
            .collect();
        if proposals.is_empty() {
            break;
        }

        // winner per sink: least cost, then lower UAV id
        let mut winners: BTreeMap<usize, usize> = BTreeMap::new();
        for (p_idx, p) in proposals.iter().enumerate() {
            ops += 1;
            winners
                .entry(p.sink)
                .and_modify(|w| {
                    let cur = &proposals[*w];
                    if p.cost < cur.cost || (p.cost == cur.cost && agents[p.agent].id < agents[cur.agent].id) {
                        *w = p_idx;
                    }
                })
                .or_insert(p_idx);
        }
        let mut accepted: Vec<usize> = winners.into_values().collect();
        accepted.sort_by_key(|&w| proposals[w].agent);
        for w in accepted {
            let p = &proposals[w];
            let agent = &mut agents[p.agent];
            let mut prev = agent.pos;
            for &step in p.via.iter().chain(std::iter::once(&p.sink)) {
                let link = net.link(prev, step).expect("proposals follow edges");
                agent.clock += link.length / agent.speed;
                prev = step;
            }
            for &v in &p.via {
                agent.route.push((v, false));
            }
            agent.route.push((p.sink, true));
            let visit = cost::visit_cost(net.sink(p.sink), agent.clock, params);
            if params.wait_advances_clock {
                agent.clock += visit.wait;
            }
            agent.pos = p.sink;
            remaining[p.sink] = false;
            visited[p.sink] = true;
            left -= 1;
        }
    }

    let mut plans = Vec::with_capacity(agents.len());
    for (agent, uav) in agents.iter().zip(fleet) {
        plans.push(build_plan(net, uav, &agent.route, params)?);
    }
    let unvisited = visited.iter().enumerate().filter(|(_, &v)| !v).map(|(i, _)| net.sink(i).id).collect();
    let mut round = RoundResult { plans, unvisited, total_z: 0.0, iterations, operations: ops };
    round.total_z = cost::objective_z(&round);
    Ok(round)
}

/// Evaluates a route (start base, then `(node, collected)` steps) and appends
/// the delivery to the nearest base station.
pub(crate) fn build_plan(net: &Network, uav: &Uav, route: &[(usize, bool)], params: &CostParams) -> Result<Plan> {
    let home = net.node_ref(route[0].0);
    if !route.iter().any(|&(_, c)| c) {
        return Ok(Plan {
            uav: uav.id,
            collection_path: vec![home.clone()],
            delivery_path: vec![home],
            legs: Vec::new(),
            arrivals: Vec::new(),
            breakdown: CostBreakdown::default(),
        });
    }
    let eval = evaluate_route(net, route, uav.speed, params)?;
    let last = route[route.len() - 1].0;
    let (path, energy, _) = nearest_base_route(net, last, &mut 0)
        .ok_or_else(|| Error::NoPath { from: net.node_ref(last), to: NodeRef::base("<any base>") })?;
    let mut legs = eval.legs;
    let mut clock = eval.clock;
    for w in path.windows(2) {
        let link = net.link(w[0], w[1]).expect("delivery path follows edges");
        clock += link.length / uav.speed;
        legs.push(Leg {
            from: net.node_ref(w[0]),
            to: net.node_ref(w[1]),
            kind: LegKind::Delivery,
            arrival: clock,
            wait: 0.0,
            late: 0.0,
            edge_energy: link.energy,
            node_cost: 0.0,
        });
    }
    let collection_path =
        std::iter::once(home).chain(route[1..].iter().filter(|(_, c)| *c).map(|&(i, _)| net.node_ref(i))).collect();
    let b = eval.breakdown;
    Ok(Plan {
        uav: uav.id,
        collection_path,
        delivery_path: path.into_iter().map(|i| net.node_ref(i)).collect(),
        legs,
        arrivals: eval.visits,
        breakdown: CostBreakdown::new(b.launch_energy, b.node_costs, b.travel_energy, energy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{BaseStation, Point, UavEdge};

    fn sink(id: SinkId, x: f64, y: f64) -> SinkNode {
        SinkNode { id, position: Point::new(x, y), revisit_deadline: 0.0, collection_energy: 1.0 }
    }

    fn base(id: &str, x: f64, y: f64, capacity: u32) -> BaseStation {
        BaseStation { id: id.into(), position: Point::new(x, y), capacity }
    }

    fn geometric(sinks: Vec<SinkNode>, bases: Vec<BaseStation>, pairs: &[(NodeRef, NodeRef)]) -> Network {
        let pos = |n: &NodeRef| match n {
            NodeRef::Sink(id) => sinks.iter().find(|s| s.id == *id).unwrap().position,
            NodeRef::Base(id) => bases.iter().find(|b| &b.id == id).unwrap().position,
        };
        let edges = pairs
            .iter()
            .map(|(a, b)| {
                let d = pos(a).distance(&pos(b));
                UavEdge { a: a.clone(), b: b.clone(), energy: d, length: d }
            })
            .collect();
        Network::new(sinks, bases, edges).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let node = SinkNode { id: 1, position: Point::default(), revisit_deadline: 10.0, collection_energy: 0.0 };
        let late30 = CostParams::default().with_late_threshold(30.0);
        assert!(!feasible_under_thresholds(&node, 45.0, &late30));
        assert!(feasible_under_thresholds(&node, 40.0, &late30));
        let free = CostParams::default();
        for t in [0.0, 9.0, 10.0, 1e6] {
            assert!(feasible_under_thresholds(&node, t, &free));
        }
        let wait = CostParams::default().with_wait_threshold(0.3);
        assert!(feasible_under_thresholds(&node, 9.8, &wait));
        assert!(!feasible_under_thresholds(&node, 9.5, &wait));
    }

    #[test]
    fn select_next_picks_cheapest_adjacent() {
        // hop energies 4 and 7.1 with zero-penalty visits of e = 0
        let mut s1 = sink(1, 4.0, 0.0);
        let mut s3 = sink(3, 0.0, 7.1);
        s1.collection_energy = 0.0;
        s3.collection_energy = 0.0;
        let net = geometric(
            vec![s1, s3],
            vec![base("B3", 0.0, 0.0, 2)],
            &[(NodeRef::base("B3"), 1.into()), (NodeRef::base("B3"), 3.into()), (1.into(), 3.into())],
        );
        let remaining: BTreeSet<SinkId> = [1, 3].into();
        let got =
            select_next(&net, &NodeRef::base("B3"), 0.0, 500.0, &remaining, &CostParams::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(got, Some((1, 4.0)));
        let none =
            select_next(&net, &NodeRef::base("B3"), 0.0, 500.0, &BTreeSet::new(), &CostParams::default()).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn conflicts_go_to_least_cost_then_lower_id() {
        let choices: BTreeMap<UavId, (SinkId, f64)> = [(1, (5, 3.0)), (2, (5, 4.2))].into();
        assert_eq!(resolve_conflicts(&choices), [(5, 1)].into());
        let choices: BTreeMap<UavId, (SinkId, f64)> = [(1, (5, 4.2)), (2, (5, 3.0))].into();
        assert_eq!(resolve_conflicts(&choices), [(5, 2)].into());
        let distinct: BTreeMap<UavId, (SinkId, f64)> = [(1, (5, 3.0)), (2, (6, 9.0)), (3, (7, 1.0))].into();
        assert_eq!(resolve_conflicts(&distinct), [(5, 1), (6, 2), (7, 3)].into());
        let tied: BTreeMap<UavId, (SinkId, f64)> = [(4, (5, 3.0)), (2, (5, 3.0))].into();
        for _ in 0..10 {
            assert_eq!(resolve_conflicts(&tied), [(5, 2)].into());
        }
    }

    #[test]
    fn single_uav_nearest_neighbour_tour() {
        // Sinks on a line-ish layout; hand-simulated nearest neighbour from B1
        // at (0,0): 1 (1,0) -> 2 (3,0) -> 4 (4,1) -> 3 (7,0); nearest base to 3 is B2 (8,0).
        let sinks = vec![sink(1, 1.0, 0.0), sink(2, 3.0, 0.0), sink(3, 7.0, 0.0), sink(4, 4.0, 1.0)];
        let bases = vec![base("B1", 0.0, 0.0, 1), base("B2", 8.0, 0.0, 1)];
        let mut pairs = vec![(NodeRef::base("B1"), 1.into()), (NodeRef::base("B2"), 3.into())];
        for a in 1..=4u32 {
            for b in a + 1..=4 {
                pairs.push((a.into(), b.into()));
            }
        }
        let net = geometric(sinks, bases, &pairs);
        let r = plan_round(&net, &[Uav::new(1, 1.0, "B1")], &CostParams::new(0.0, 0.0, 1.0)).unwrap();
        let p = &r.plans[0];
        let expected: Vec<NodeRef> = vec![NodeRef::base("B1"), 1.into(), 2.into(), 4.into(), 3.into()];
        assert_eq!(p.collection_path, expected);
        assert_eq!(p.delivery_path, vec![NodeRef::Sink(3), NodeRef::base("B2")]);
        assert!(r.unvisited.is_empty());
        let hops = 1.0 + 2.0 + 2f64.sqrt() + 10f64.sqrt();
        assert!((p.breakdown.total - (hops + 4.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn delivery_walks_back_through_visited_sinks() {
        let sinks = vec![sink(1, 1.0, 0.0), sink(2, 2.0, 0.0), sink(3, 3.0, 0.0)];
        let bases = vec![base("B1", 0.0, 0.0, 1)];
        let pairs = [(NodeRef::base("B1"), 1.into()), (1.into(), 2.into()), (2.into(), 3.into())];
        let net = geometric(sinks, bases, &pairs);
        let r = plan_round(&net, &[Uav::new(1, 1.0, "B1")], &CostParams::new(0.0, 0.0, 1.0)).unwrap();
        assert!(r.unvisited.is_empty());
        assert_eq!(r.plans[0].collection_path.len(), 4);
        assert_eq!(r.plans[0].delivery_path, vec![3.into(), 2.into(), 1.into(), NodeRef::base("B1")]);
        assert_eq!(r.plans[0].breakdown.delivery_energy, 3.0);
    }

    #[test]
    fn stalled_uav_transits_visited_sinks() {
        // B1-1, 1-2, 1-3 only. From 1 the UAV takes 2 (cost 2 < 3), then has no
        // remaining neighbour and must fly 2 -> 1 -> 3.
        let sinks = vec![sink(1, 0.0, 1.0), sink(2, 1.0, 1.0), sink(3, 0.0, 3.0)];
        let bases = vec![base("B1", 0.0, 0.0, 1)];
        let pairs = [(NodeRef::base("B1"), 1.into()), (1.into(), 2.into()), (1.into(), 3.into())];
        let net = geometric(sinks, bases, &pairs);
        let r = plan_round(&net, &[Uav::new(1, 1.0, "B1")], &CostParams::new(0.0, 0.0, 1.0)).unwrap();
        let p = &r.plans[0];
        assert_eq!(p.collection_path, vec![NodeRef::base("B1"), 1.into(), 2.into(), 3.into()]);
        let kinds: Vec<LegKind> = p.legs.iter().map(|l| l.kind).collect();
        assert_eq!(
            kinds,
            [
                LegKind::Collect,
                LegKind::Collect,
                LegKind::Transit,
                LegKind::Collect,
                LegKind::Delivery,
                LegKind::Delivery
            ]
        );
        // launch 1, travel 1 + 1 + 2, visits 3 * 1, delivery 3 -> 1 -> B1 = 3
        assert_eq!(p.breakdown.launch_energy, 1.0);
        assert_eq!(p.breakdown.travel_energy, 4.0);
        assert_eq!(p.breakdown.delivery_energy, 3.0);
        let legs: f64 = p.legs.iter().map(|l| l.energy()).sum();
        assert!((legs - p.breakdown.total).abs() < 1e-12);
    }

    #[test]
    fn capacity_and_base_validation() {
        let net = geometric(
            vec![sink(1, 1.0, 0.0)],
            vec![base("B1", 0.0, 0.0, 1), base("B2", 5.0, 0.0, 1)],
            &[(NodeRef::base("B1"), 1.into())],
        );
        let params = CostParams::default();
        let two = [Uav::new(1, 1.0, "B1"), Uav::new(2, 1.0, "B1")];
        assert!(matches!(plan_round(&net, &two, &params), Err(Error::Config(_))));
        assert!(plan_round_with(&net, &two, &params, &PlanOptions { enforce_capacity: false }).is_ok());
        assert!(matches!(plan_round(&net, &[Uav::new(1, 1.0, "B9")], &params), Err(Error::Config(_))));
        assert!(matches!(plan_round(&net, &[Uav::new(1, 1.0, "B2")], &params), Err(Error::Config(_))));
        assert!(matches!(plan_round(&net, &[], &params), Err(Error::Config(_))));
    }

    #[test]
    fn empty_network_round_is_zero() {
        let net = Network::new(vec![], vec![base("B1", 0.0, 0.0, 1)], vec![]).unwrap();
        let r = plan_round(&net, &[Uav::new(1, 1.0, "B1")], &CostParams::default()).unwrap();
        assert_eq!(r.total_z, 0.0);
        assert_eq!(r.plans[0].delivery_path, vec![NodeRef::base("B1")]);
        assert!(r.plans[0].legs.is_empty());
    }
}
