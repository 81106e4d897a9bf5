//! Transformations between one-depot vehicle routing instances and
//! zero-weight data-muling instances.
//!
//! Inverting weights keeps the instance a minimum-total-energy problem: the
//! inverted weights are simply the new energies.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::network::{BaseStation, Network, NodeRef, Point, SinkId, SinkNode, UavEdge};
use crate::planner::Uav;

/// Id given to the merged base station.
pub const CLUSTER_BASE_ID: &str = "BC";

/// Id given to the depot when the instance file does not name it.
pub const DEPOT_ID: &str = "D";

/// Largest customer count the brute-force tour enumeration accepts.
pub const MAX_BRUTE_FORCE_CUSTOMERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrpDepot {
    #[serde(default = "default_depot_id")]
    pub id: String,
    pub x: f64,
    pub y: f64,
}

fn default_depot_id() -> String {
    DEPOT_ID.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrpCustomer {
    pub id: SinkId,
    pub x: f64,
    pub y: f64,
}

/// A one-depot routing instance. `matrix`, when present, is indexed depot
/// first and then customers in listed order; otherwise Euclidean distances
/// are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrpInstance {
    pub depot: VrpDepot,
    pub customers: Vec<VrpCustomer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    pub vehicles: u32,
}

impl VrpInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        let vrp: VrpInstance = serde_json::from_str(text)?;
        vrp.validate()?;
        Ok(vrp)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn point(&self, i: usize) -> Point {
        if i == 0 {
            Point::new(self.depot.x, self.depot.y)
        } else {
            let c = &self.customers[i - 1];
            Point::new(c.x, c.y)
        }
    }

    /// Weight between nodes `i` and `j`, 0 being the depot.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.matrix {
            Some(m) => m[i][j],
            None => self.point(i).distance(&self.point(j)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNetwork(m));
        if self.vehicles == 0 {
            return bad("a VRP instance needs at least one vehicle".into());
        }
        if self.depot.id.parse::<SinkId>().is_ok() {
            return bad(format!("depot id {:?} must not be numeric", self.depot.id));
        }
        let mut ids = BTreeSet::new();
        for c in &self.customers {
            if !ids.insert(c.id) {
                return bad(format!("duplicate customer id {}", c.id));
            }
        }
        let n = self.customers.len() + 1;
        if let Some(m) = &self.matrix {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return bad(format!("distance matrix must be {n}x{n}"));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.distance(i, j), self.distance(j, i));
                if !(a > 0.0) || !a.is_finite() {
                    return bad(format!("weight between nodes {i} and {j} must be positive, got {a}"));
                }
                if (a - b).abs() > 1e-9 * a.max(b) {
                    return bad(format!("distance matrix is not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(())
    }
}

/// Merges all base stations into one placed at their centroid, with their
/// summed capacity. Each sink keeps the cheapest of its base edges.
pub fn cluster_bases(net: &Network) -> Result<Network> {
    let bases = net.bases();
    if bases.len() <= 1 {
        return Ok(net.clone());
    }
    let n = bases.len() as f64;
    let centroid = Point::new(
        bases.iter().map(|b| b.position.x).sum::<f64>() / n,
        bases.iter().map(|b| b.position.y).sum::<f64>() / n,
    );
    let merged = BaseStation {
        id: CLUSTER_BASE_ID.to_string(),
        position: centroid,
        capacity: bases.iter().map(|b| b.capacity).sum(),
    };
    let mut cheapest: BTreeMap<SinkId, (f64, f64)> = BTreeMap::new();
    let mut edges = Vec::new();
    for e in net.edges() {
        match (&e.a, &e.b) {
            (NodeRef::Sink(_), NodeRef::Sink(_)) => edges.push(e.clone()),
            (NodeRef::Sink(s), NodeRef::Base(_)) | (NodeRef::Base(_), NodeRef::Sink(s)) => {
                let entry = cheapest.entry(*s).or_insert((e.energy, e.length));
                if e.energy < entry.0 {
                    *entry = (e.energy, e.length);
                }
            }
            (NodeRef::Base(_), NodeRef::Base(_)) => unreachable!("networks have no base-base edges"),
        }
    }
    for (s, (energy, length)) in cheapest {
        edges.push(UavEdge { a: NodeRef::base(CLUSTER_BASE_ID), b: NodeRef::Sink(s), energy, length });
    }
    Ok(Network::new(net.sinks().to_vec(), vec![merged], edges)?
        .with_wireless_links(net.wireless_links().to_vec(), net.sensor_nodes().to_vec()))
}

/// Replaces every edge energy `w` by `1 / w`.
pub fn invert_weights(net: &Network) -> Result<Network> {
    let mut edges = net.edges().to_vec();
    for e in &mut edges {
        if e.energy == 0.0 {
            return Err(Error::Domain(format!("edge {}-{} has zero weight and cannot be inverted", e.a, e.b)));
        }
        e.energy = 1.0 / e.energy;
    }
    Ok(Network::new(net.sinks().to_vec(), net.bases().to_vec(), edges)?
        .with_wireless_links(net.wireless_links().to_vec(), net.sensor_nodes().to_vec()))
}

/// The data-muling instance equivalent to a VRP: the depot becomes the only
/// base, customers become sinks with zero deadline and zero collection
/// energy, and the fleet is `vehicles` identical UAVs of unit speed.
///
/// The returned parameters set α = β = γ = 0. A zero deadline makes every
/// arrival late, so zero node weights alone would not cancel the visit cost.
pub fn vrp_to_datamuling(vrp: &VrpInstance) -> Result<(Network, Vec<Uav>, CostParams)> {
    vrp.validate()?;
    let sinks: Vec<SinkNode> = vrp
        .customers
        .iter()
        .map(|c| SinkNode { id: c.id, position: Point::new(c.x, c.y), revisit_deadline: 0.0, collection_energy: 0.0 })
        .collect();
    let base = BaseStation { id: vrp.depot.id.clone(), position: vrp.point(0), capacity: vrp.vehicles };
    let n = vrp.customers.len();
    let node = |i: usize| {
        if i == 0 {
            NodeRef::base(vrp.depot.id.as_str())
        } else {
            NodeRef::Sink(vrp.customers[i - 1].id)
        }
    };
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..=n {
        for j in i + 1..=n {
            let w = vrp.distance(i, j);
            edges.push(UavEdge { a: node(i), b: node(j), energy: w, length: w });
        }
    }
    let net = Network::new(sinks, vec![base], edges)?;
    let fleet = (1..=vrp.vehicles).map(|id| Uav::new(id, 1.0, vrp.depot.id.as_str())).collect();
    Ok((net, fleet, CostParams::new(0.0, 0.0, 0.0)))
}

/// A set of depot-to-depot tours and their total length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrpSolution {
    pub routes: Vec<Vec<SinkId>>,
    pub cost: f64,
}

/// Best single-vehicle tour depot → customers → depot by enumerating every
/// permutation. Ties keep the lexicographically first customer order.
pub fn brute_force_tour(vrp: &VrpInstance) -> Result<VrpSolution> {
    vrp.validate()?;
    let n = vrp.customers.len();
    if n > MAX_BRUTE_FORCE_CUSTOMERS {
        return Err(Error::OracleRefused { sinks: n, uavs: 1, max_sinks: MAX_BRUTE_FORCE_CUSTOMERS, max_uavs: 1 });
    }
    if n == 0 {
        return Ok(VrpSolution { routes: vec![], cost: 0.0 });
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&i| vrp.customers[i - 1].id);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm = order.clone();
    permute(&mut perm, 0, &mut |p| {
        let mut c = vrp.distance(0, p[0]) + vrp.distance(p[n - 1], 0);
        for w in p.windows(2) {
            c += vrp.distance(w[0], w[1]);
        }
        let better = match &best {
            None => true,
            Some((bc, bp)) => c < *bc || (c == *bc && p < bp.as_slice()),
        };
        if better {
            best = Some((c, p.to_vec()));
        }
    });
    let (cost, p) = best.expect("at least one permutation");
    Ok(VrpSolution { routes: vec![p.into_iter().map(|i| vrp.customers[i - 1].id).collect()], cost })
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
