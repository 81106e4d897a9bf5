//! The hybrid sensor network: sinks (cluster heads), base stations and the
//! UAV-move graph connecting them.
//!
//! Nodes are addressed externally by [`NodeRef`]; internally every node has a
//! dense index, sinks first and base stations after them. Only base-sink and
//! sink-sink moves exist.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type SinkId = u32;

/// Mean Earth radius used by the local equirectangular projection, in metres.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Reference to a node of the network: sinks are integers, base stations are
/// string labels such as `B1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeRef {
    Sink(SinkId),
    Base(String),
}

impl NodeRef {
    pub fn base(id: impl Into<String>) -> Self {
        NodeRef::Base(id.into())
    }

    pub fn is_sink(&self) -> bool {
        matches!(self, NodeRef::Sink(_))
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Sink(id) => write!(f, "{id}"),
            NodeRef::Base(id) => f.write_str(id),
        }
    }
}

impl FromStr for NodeRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s.parse::<SinkId>() {
            Ok(id) => NodeRef::Sink(id),
            Err(_) => NodeRef::Base(s.to_string()),
        })
    }
}

impl From<SinkId> for NodeRef {
    fn from(id: SinkId) -> Self {
        NodeRef::Sink(id)
    }
}

impl From<&str> for NodeRef {
    fn from(id: &str) -> Self {
        id.parse().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A cluster head visited by UAVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinkNode {
    pub id: SinkId,
    #[serde(flatten)]
    pub position: Point,
    /// Time (minutes after takeoff) at which the sink's data is mature.
    #[serde(rename = "r")]
    pub revisit_deadline: f64,
    /// Energy needed to transfer the sink's data to a UAV.
    #[serde(rename = "e")]
    pub collection_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub id: String,
    #[serde(flatten)]
    pub position: Point,
    /// Maximum number of UAVs hosted at round start.
    pub capacity: u32,
}

/// A bidirectional UAV move with a single symmetric weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavEdge {
    pub a: NodeRef,
    pub b: NodeRef,
    pub energy: f64,
    pub length: f64,
}

/// One adjacency entry of the move graph, by dense node index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub to: usize,
    pub energy: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct NetworkFile {
    sinks: Vec<SinkNode>,
    bases: Vec<BaseStation>,
    edges: Vec<UavEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    wireless_links: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sensor_nodes: Vec<u32>,
}

/// The network graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkFile", into = "NetworkFile")]
pub struct Network {
    sinks: Vec<SinkNode>,
    bases: Vec<BaseStation>,
    edges: Vec<UavEdge>,
    wireless_links: Vec<[u32; 2]>,
    sensor_nodes: Vec<u32>,
    index: HashMap<NodeRef, usize>,
    adjacency: Vec<Vec<Link>>,
}

impl TryFrom<NetworkFile> for Network {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        let mut net = Network::new(file.sinks, file.bases, file.edges)?;
        net.wireless_links = file.wireless_links;
        net.sensor_nodes = file.sensor_nodes;
        Ok(net)
    }
}

impl From<Network> for NetworkFile {
    fn from(net: Network) -> Self {
        NetworkFile {
            sinks: net.sinks,
            bases: net.bases,
            edges: net.edges,
            wireless_links: net.wireless_links,
            sensor_nodes: net.sensor_nodes,
        }
    }
}

impl Network {
    /// Builds a network, checking the structural invariants: unique ids,
    /// non-negative values, edges between existing nodes, no base-base edge
    /// and at most one edge per node pair.
    ///
    /// Connectivity is checked separately by [`Network::check_connectivity`].
    pub fn new(sinks: Vec<SinkNode>, bases: Vec<BaseStation>, edges: Vec<UavEdge>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidNetwork(msg));
        let mut index = HashMap::with_capacity(sinks.len() + bases.len());
        for (i, s) in sinks.iter().enumerate() {
            if !(s.revisit_deadline >= 0.0) || !s.revisit_deadline.is_finite() {
                return invalid(format!("sink {} has invalid revisit deadline {}", s.id, s.revisit_deadline));
            }
            if !(s.collection_energy >= 0.0) || !s.collection_energy.is_finite() {
                return invalid(format!("sink {} has invalid collection energy {}", s.id, s.collection_energy));
            }
            if index.insert(NodeRef::Sink(s.id), i).is_some() {
                return invalid(format!("duplicate sink id {}", s.id));
            }
        }
        for (j, b) in bases.iter().enumerate() {
            if b.capacity < 1 {
                return invalid(format!("base {} has zero capacity", b.id));
            }
            if b.id.parse::<SinkId>().is_ok() {
                return invalid(format!("base id {:?} must not be a bare integer", b.id));
            }
            if index.insert(NodeRef::Base(b.id.clone()), sinks.len() + j).is_some() {
                return invalid(format!("duplicate base id {}", b.id));
            }
        }

        let mut adjacency = vec![Vec::new(); sinks.len() + bases.len()];
        let mut seen = HashSet::new();
        for e in &edges {
            let (Some(&a), Some(&b)) = (index.get(&e.a), index.get(&e.b)) else {
                return invalid(format!("edge {}-{} references an unknown node", e.a, e.b));
            };
            if a == b {
                return invalid(format!("self-loop at {}", e.a));
            }
            if a >= sinks.len() && b >= sinks.len() {
                return invalid(format!("edge {}-{} joins two base stations", e.a, e.b));
            }
            if !(e.energy >= 0.0) || !(e.length >= 0.0) || !e.energy.is_finite() || !e.length.is_finite() {
                return invalid(format!("edge {}-{} has a negative or non-finite weight", e.a, e.b));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return invalid(format!("duplicate edge {}-{}", e.a, e.b));
            }
            adjacency[a].push(Link { to: b, energy: e.energy, length: e.length });
            adjacency[b].push(Link { to: a, energy: e.energy, length: e.length });
        }
        for links in &mut adjacency {
            links.sort_by_key(|l| l.to);
        }

        Ok(Network { sinks, bases, edges, wireless_links: Vec::new(), sensor_nodes: Vec::new(), index, adjacency })
    }

    /// Checks that the sink subgraph is connected and that every base
    /// station has at least one move edge. Networks without sinks pass.
    pub fn check_connectivity(&self) -> Result<()> {
        if self.sinks.is_empty() {
            return Ok(());
        }
        for (j, b) in self.bases.iter().enumerate() {
            if self.adjacency[self.sinks.len() + j].is_empty() {
                return Err(Error::InvalidNetwork(format!("base {} has no UAV edge", b.id)));
            }
        }
        let n = self.sinks.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for l in &self.adjacency[i] {
                if l.to < n && !seen[l.to] {
                    seen[l.to] = true;
                    stack.push(l.to);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidNetwork(format!(
                "sink {} is not connected to sink {} through sink-sink moves",
                self.sinks[i].id, self.sinks[0].id
            )));
        }
        Ok(())
    }

    pub fn with_wireless_links(mut self, links: Vec<[u32; 2]>, sensors: Vec<u32>) -> Self {
        self.wireless_links = links;
        self.sensor_nodes = sensors;
        self
    }

    pub fn sinks(&self) -> &[SinkNode] {
        &self.sinks
    }

    pub fn bases(&self) -> &[BaseStation] {
        &self.bases
    }

    pub fn edges(&self) -> &[UavEdge] {
        &self.edges
    }

    pub fn wireless_links(&self) -> &[[u32; 2]] {
        &self.wireless_links
    }

    pub fn sensor_nodes(&self) -> &[u32] {
        &self.sensor_nodes
    }

    pub fn node_count(&self) -> usize {
        self.sinks.len() + self.bases.len()
    }

    pub fn sink_count(&self) -> usize {
        self.sinks.len()
    }

    pub fn index_of(&self, node: &NodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub(crate) fn require(&self, node: &NodeRef) -> Result<usize> {
        self.index_of(node).ok_or_else(|| Error::UnknownNode(node.clone()))
    }

    pub fn is_sink_index(&self, idx: usize) -> bool {
        idx < self.sinks.len()
    }

    pub fn node_ref(&self, idx: usize) -> NodeRef {
        if idx < self.sinks.len() {
            NodeRef::Sink(self.sinks[idx].id)
        } else {
            NodeRef::Base(self.bases[idx - self.sinks.len()].id.clone())
        }
    }

    pub fn position(&self, idx: usize) -> Point {
        if idx < self.sinks.len() {
            self.sinks[idx].position
        } else {
            self.bases[idx - self.sinks.len()].position
        }
    }

    pub fn sink(&self, idx: usize) -> &SinkNode {
        &self.sinks[idx]
    }

    pub fn sink_by_id(&self, id: SinkId) -> Option<&SinkNode> {
        self.index_of(&NodeRef::Sink(id)).map(|i| &self.sinks[i])
    }

    pub fn base(&self, idx: usize) -> &BaseStation {
        &self.bases[idx - self.sinks.len()]
    }

    pub fn base_by_id(&self, id: &str) -> Option<&BaseStation> {
        self.index_of(&NodeRef::base(id)).map(|i| self.base(i))
    }

    /// Neighbours of a node in the move graph, sorted by index.
    pub fn neighbors(&self, idx: usize) -> &[Link] {
        &self.adjacency[idx]
    }

    pub fn link(&self, a: usize, b: usize) -> Option<&Link> {
        let links = &self.adjacency[a];
        links.binary_search_by_key(&b, |l| l.to).ok().map(|i| &links[i])
    }

    pub fn edge_between(&self, a: &NodeRef, b: &NodeRef) -> Option<&Link> {
        let (a, b) = (self.index_of(a)?, self.index_of(b)?);
        self.link(a, b)
    }

    /// Number of move edges incident to a node.
    pub fn degree(&self, idx: usize) -> usize {
        self.adjacency[idx].len()
    }

    /// Largest Euclidean distance between any two nodes.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = (0..self.node_count()).map(|i| self.position(i)).collect();
        diameter_of(&pts)
    }

    /// Minimum-energy path over the whole move graph.
    pub fn shortest_uav_path(&self, from: &NodeRef, to: &NodeRef) -> Result<(Vec<NodeRef>, f64)> {
        let (src, dst) = (self.require(from)?, self.require(to)?);
        let sp = self.dijkstra(src, |_| true, &mut 0);
        match sp.path_to(dst) {
            Some(path) => Ok((path.into_iter().map(|i| self.node_ref(i)).collect(), sp.dist[dst])),
            None => Err(Error::NoPath { from: from.clone(), to: to.clone() }),
        }
    }

    /// Dijkstra from `src`. Nodes other than `src` are only expanded (used as
    /// transit) when `expand` returns true; unexpanded nodes still receive a
    /// distance. Ties are broken by lower node index. Every edge relaxation
    /// increments `ops`.
    pub(crate) fn dijkstra(&self, src: usize, expand: impl Fn(usize) -> bool, ops: &mut u64) -> ShortestPaths {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![None; n];
        let mut length = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        length[src] = 0.0;
        heap.push(HeapEntry { dist: 0.0, node: src });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            if node != src && !expand(node) {
                continue;
            }
            for l in &self.adjacency[node] {
                *ops += 1;
                let nd = d + l.energy;
                if nd < dist[l.to] {
                    dist[l.to] = nd;
                    prev[l.to] = Some(node);
                    length[l.to] = length[node] + l.length;
                    heap.push(HeapEntry { dist: nd, node: l.to });
                }
            }
        }
        ShortestPaths { src, dist, prev, length }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let net: Network = serde_json::from_str(text)?;
        net.check_connectivity()?;
        Ok(net)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub(crate) struct ShortestPaths {
    pub src: usize,
    pub dist: Vec<f64>,
    pub prev: Vec<Option<usize>>,
    /// Geometric length along the chosen minimum-energy path.
    pub length: Vec<f64>,
}

impl ShortestPaths {
    pub fn path_to(&self, dst: usize) -> Option<Vec<usize>> {
        if !self.dist[dst].is_finite() {
            return None;
        }
        let mut path = vec![dst];
        let mut cur = dst;
        while cur != self.src {
            cur = self.prev[cur]?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn diameter_of(points: &[Point]) -> f64 {
    let mut d = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.distance(q));
        }
    }
    d
}

/// How revisit deadlines are drawn for generated or ingested sinks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeadlineRange {
    /// Uniform on `[lo, hi]` minutes.
    Fixed(f64, f64),
    /// Uniform on `[0, 2 * diameter / speed]` where `speed` is in metres per
    /// minute (the fleet's median speed).
    Auto { speed: f64 },
}

impl DeadlineRange {
    fn resolve(&self, diameter: f64) -> Result<(f64, f64)> {
        match *self {
            DeadlineRange::Fixed(lo, hi) => check_range("deadline_range", lo, hi).map(|_| (lo, hi)),
            DeadlineRange::Auto { speed } => {
                if !(speed > 0.0) {
                    return Err(Error::InvalidParameter(format!("reference speed must be positive, got {speed}")));
                }
                Ok((0.0, 2.0 * diameter / speed))
            }
        }
    }
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<()> {
    if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n_sinks: usize,
    pub n_bases: usize,
    /// Side of the square deployment area, metres.
    pub area_side: f64,
    pub deadline_range: DeadlineRange,
    pub energy_range: (f64, f64),
    /// Number of nearest sinks each base station is connected to.
    pub base_degree: usize,
    /// Energy units per metre of flight.
    pub energy_per_metre: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_sinks: 30,
            n_bases: 5,
            area_side: 1000.0,
            deadline_range: DeadlineRange::Auto { speed: 500.0 },
            energy_range: (1.0, 10.0),
            base_degree: 3,
            energy_per_metre: 1.0,
            seed: 0,
        }
    }
}

/// Places sinks and base stations uniformly in a square, joins every sink
/// pair, and connects each base station to its `base_degree` nearest sinks.
/// Base capacity equals its degree.
pub fn generate_random_network(cfg: &GeneratorConfig) -> Result<Network> {
    if cfg.n_sinks == 0 || cfg.n_bases == 0 {
        return Err(Error::InvalidParameter("need at least one sink and one base station".into()));
    }
    if !(cfg.area_side > 0.0) || !cfg.area_side.is_finite() {
        return Err(Error::InvalidParameter(format!("area side must be positive, got {}", cfg.area_side)));
    }
    if cfg.base_degree == 0 {
        return Err(Error::InvalidParameter("base degree must be at least 1".into()));
    }
    if !(cfg.energy_per_metre >= 0.0) || !cfg.energy_per_metre.is_finite() {
        return Err(Error::InvalidParameter("energy per metre must be non-negative".into()));
    }
    check_range("energy_range", cfg.energy_range.0, cfg.energy_range.1)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let side = cfg.area_side;
    let sink_pos: Vec<Point> =
        (0..cfg.n_sinks).map(|_| Point::new(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side))).collect();
    let base_pos: Vec<Point> =
        (0..cfg.n_bases).map(|_| Point::new(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side))).collect();
    let all: Vec<Point> = sink_pos.iter().chain(&base_pos).copied().collect();
    let deadlines = cfg.deadline_range.resolve(diameter_of(&all))?;

    let sinks: Vec<SinkNode> = sink_pos
        .iter()
        .enumerate()
        .map(|(i, &p)| SinkNode {
            id: i as SinkId + 1,
            position: p,
            revisit_deadline: draw(&mut rng, deadlines),
            collection_energy: draw(&mut rng, cfg.energy_range),
        })
        .collect();
    let bases: Vec<(String, Point)> = base_pos.iter().enumerate().map(|(j, &p)| (format!("B{}", j + 1), p)).collect();
    assemble(sinks, bases, None, cfg.base_degree, cfg.energy_per_metre)
}

/// Complete sink-sink graph plus k-nearest base connections.
fn assemble(
    sinks: Vec<SinkNode>,
    bases: Vec<(String, Point)>,
    capacities: Option<Vec<u32>>,
    base_degree: usize,
    energy_per_metre: f64,
) -> Result<Network> {
    let mut edges = Vec::new();
    for (i, a) in sinks.iter().enumerate() {
        for b in &sinks[i + 1..] {
            let length = a.position.distance(&b.position);
            edges.push(UavEdge {
                a: NodeRef::Sink(a.id),
                b: NodeRef::Sink(b.id),
                energy: length * energy_per_metre,
                length,
            });
        }
    }
    let k = base_degree.min(sinks.len());
    let mut stations = Vec::with_capacity(bases.len());
    for (j, (id, pos)) in bases.into_iter().enumerate() {
        let mut order: Vec<(f64, SinkId)> = sinks.iter().map(|s| (pos.distance(&s.position), s.id)).collect();
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(length, sid) in &order[..k] {
            edges.push(UavEdge {
                a: NodeRef::Base(id.clone()),
                b: NodeRef::Sink(sid),
                energy: length * energy_per_metre,
                length,
            });
        }
        let capacity = capacities.as_ref().map_or(k as u32, |c| c[j]);
        stations.push(BaseStation { id, position: pos, capacity });
    }
    let net = Network::new(sinks, stations, edges)?;
    net.check_connectivity()?;
    Ok(net)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpsIngestOptions {
    /// Projection origin (lat, lon) in degrees; defaults to the centroid of
    /// all listed points.
    pub origin: Option<(f64, f64)>,
    pub base_degree: usize,
    pub energy_per_metre: f64,
    pub deadline_range: DeadlineRange,
    pub energy_range: (f64, f64),
    pub seed: u64,
}

impl Default for GpsIngestOptions {
    fn default() -> Self {
        GpsIngestOptions {
            origin: None,
            base_degree: 3,
            energy_per_metre: 1.0,
            deadline_range: DeadlineRange::Auto { speed: 500.0 },
            energy_range: (1.0, 10.0),
            seed: 0,
        }
    }
}

/// Local equirectangular projection of `(lat, lon)` about `origin`, in metres
/// (x east, y north).
pub fn project_equirectangular((lat, lon): (f64, f64), (lat0, lon0): (f64, f64)) -> Point {
    let x = EARTH_RADIUS_M * (lon - lon0).to_radians() * lat0.to_radians().cos();
    let y = EARTH_RADIUS_M * (lat - lat0).to_radians();
    Point::new(x, y)
}

struct GpsRow {
    label: String,
    lat: f64,
    lon: f64,
    capacity: Option<u32>,
}

fn read_gps_rows(path: &Path, with_capacity: bool) -> Result<Vec<GpsRow>> {
    let ingest = |line: usize, message: String| Error::Ingest { path: path.to_path_buf(), line, message };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| ingest(0, e.to_string()))?;
    let headers = rdr.headers().map_err(|e| ingest(1, e.to_string()))?.clone();
    let expected: &[&str] = if with_capacity { &["label", "lat", "lon", "capacity"] } else { &["label", "lat", "lon"] };
    let got: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if got != expected {
        return Err(ingest(1, format!("expected header {}, found {}", expected.join(","), got.join(","))));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| ingest(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != expected.len() {
            return Err(ingest(line, format!("expected {} fields, found {}", expected.len(), rec.len())));
        }
        let num = |i: usize, what: &str| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ingest(line, format!("invalid {what} {:?}", &rec[i])))
        };
        let lat = num(1, "latitude")?;
        let lon = num(2, "longitude")?;
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(ingest(line, format!("coordinates out of range ({lat}, {lon})")));
        }
        let capacity = if with_capacity {
            Some(
                rec[3]
                    .parse::<u32>()
                    .ok()
                    .filter(|&c| c >= 1)
                    .ok_or_else(|| ingest(line, format!("invalid capacity {:?}", &rec[3])))?,
            )
        } else {
            None
        };
        rows.push(GpsRow { label: rec[0].to_string(), lat, lon, capacity });
    }
    Ok(rows)
}

/// Reads sink stations (`label,lat,lon`) and base stations
/// (`label,lat,lon,capacity`) and builds a network over their projected
/// positions with a complete sink-sink move graph.
pub fn ingest_gps_csv(sinks_path: &Path, bases_path: Option<&Path>, opts: &GpsIngestOptions) -> Result<Network> {
    let sink_rows = read_gps_rows(sinks_path, false)?;
    let base_rows = match bases_path {
        Some(p) => read_gps_rows(p, true)?,
        None => Vec::new(),
    };
    if base_rows.is_empty() {
        return Err(Error::Ingest {
            path: bases_path.unwrap_or(sinks_path).to_path_buf(),
            line: 0,
            message: "no base station listed".into(),
        });
    }
    if sink_rows.is_empty() {
        return Err(Error::Ingest { path: sinks_path.to_path_buf(), line: 0, message: "no sink listed".into() });
    }
    if opts.base_degree == 0 {
        return Err(Error::InvalidParameter("base degree must be at least 1".into()));
    }
    check_range("energy_range", opts.energy_range.0, opts.energy_range.1)?;

    let mut labels = HashSet::new();
    let mut sink_ids = Vec::with_capacity(sink_rows.len());
    for (k, row) in sink_rows.iter().enumerate() {
        let line = k + 2;
        let id = row.label.parse::<SinkId>().map_err(|_| Error::Ingest {
            path: sinks_path.to_path_buf(),
            line,
            message: format!("sink label {:?} is not an integer", row.label),
        })?;
        if !labels.insert(row.label.clone()) {
            return Err(Error::Ingest {
                path: sinks_path.to_path_buf(),
                line,
                message: format!("duplicate label {}", row.label),
            });
        }
        sink_ids.push(id);
    }
    let bases_path = bases_path.unwrap();
    for (k, row) in base_rows.iter().enumerate() {
        if row.label.parse::<SinkId>().is_ok() || !labels.insert(row.label.clone()) {
            return Err(Error::Ingest {
                path: bases_path.to_path_buf(),
                line: k + 2,
                message: format!("base label {:?} is duplicate or numeric", row.label),
            });
        }
    }

    let origin = opts.origin.unwrap_or_else(|| {
        let n = (sink_rows.len() + base_rows.len()) as f64;
        let (lat, lon) = sink_rows.iter().chain(&base_rows).fold((0.0, 0.0), |(a, b), r| (a + r.lat, b + r.lon));
        (lat / n, lon / n)
    });
    let sink_pos: Vec<Point> = sink_rows.iter().map(|r| project_equirectangular((r.lat, r.lon), origin)).collect();
    let base_pos: Vec<Point> = base_rows.iter().map(|r| project_equirectangular((r.lat, r.lon), origin)).collect();
    let all: Vec<Point> = sink_pos.iter().chain(&base_pos).copied().collect();
    let deadlines = opts.deadline_range.resolve(diameter_of(&all))?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sinks = sink_ids
        .iter()
        .zip(&sink_pos)
        .map(|(&id, &position)| SinkNode {
            id,
            position,
            revisit_deadline: draw(&mut rng, deadlines),
            collection_energy: draw(&mut rng, opts.energy_range),
        })
        .collect();
    let capacities = base_rows.iter().map(|r| r.capacity.unwrap_or(1)).collect();
    let bases = base_rows.into_iter().zip(base_pos).map(|(r, p)| (r.label, p)).collect();
    assemble(sinks, bases, Some(capacities), opts.base_degree, opts.energy_per_metre)
}
