//! Scenario configuration files.
//!
//! A config is one JSON document. Relative paths inside it resolve against
//! the directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use datamule::cost::NodeThresholds;
use datamule::metrics::{SweepParam, SweepSchedule, ThresholdKind};
use datamule::network::{generate_random_network, ingest_gps_csv, DeadlineRange, GeneratorConfig, GpsIngestOptions};
use datamule::reduction::VrpInstance;
use datamule::{CostParams, Error, Network, OracleLimits, Scenario, SinkId, Uav, UavId};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub network: NetworkSource,
    #[serde(default)]
    pub fleet: Vec<UavSpec>,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub oracle: Option<LimitsSpec>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub svg: Option<bool>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSource {
    Generate(GenerateSpec),
    File { path: PathBuf },
    GpsCsv(GpsSpec),
    Vrp { path: PathBuf },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    #[serde(default = "d_sinks")]
    pub n_sinks: usize,
    #[serde(default = "d_bases")]
    pub n_bases: usize,
    #[serde(default = "d_side")]
    pub area_side: f64,
    /// Minutes; defaults to twice the network diameter over the fleet's
    /// median speed.
    #[serde(default)]
    pub deadline_range: Option<(f64, f64)>,
    #[serde(default = "d_energy")]
    pub energy_range: (f64, f64),
    #[serde(default = "d_degree")]
    pub base_degree: usize,
    #[serde(default = "d_kappa")]
    pub energy_per_metre: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpsSpec {
    pub sinks: PathBuf,
    pub bases: PathBuf,
    #[serde(default)]
    pub origin: Option<(f64, f64)>,
    #[serde(default)]
    pub deadline_range: Option<(f64, f64)>,
    #[serde(default = "d_energy")]
    pub energy_range: (f64, f64),
    #[serde(default = "d_degree")]
    pub base_degree: usize,
    #[serde(default = "d_kappa")]
    pub energy_per_metre: f64,
}

fn d_sinks() -> usize {
    30
}
fn d_bases() -> usize {
    5
}
fn d_side() -> f64 {
    1000.0
}
fn d_energy() -> (f64, f64) {
    (1.0, 10.0)
}
fn d_degree() -> usize {
    3
}
fn d_kappa() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavSpec {
    pub id: UavId,
    /// Metres per minute.
    pub speed: f64,
    pub home_base: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default = "half")]
    pub alpha: f64,
    #[serde(default = "half")]
    pub beta: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    /// Derived from the finite thresholds when omitted.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default = "inf", with = "datamule::serde_ext::threshold")]
    pub wait: f64,
    #[serde(default = "inf", with = "datamule::serde_ext::threshold")]
    pub late: f64,
    #[serde(default)]
    pub overrides: BTreeMap<SinkId, NodeThresholds>,
    #[serde(default = "yes")]
    pub wait_advances_clock: bool,
}

fn half() -> f64 {
    0.5
}
fn one() -> f64 {
    1.0
}
fn inf() -> f64 {
    f64::INFINITY
}
fn yes() -> bool {
    true
}

impl Default for ParamsSpec {
    fn default() -> Self {
        ParamsSpec {
            alpha: 0.5,
            beta: 0.5,
            gamma: 1.0,
            scenario: None,
            wait: f64::INFINITY,
            late: f64::INFINITY,
            overrides: BTreeMap::new(),
            wait_advances_clock: true,
        }
    }
}

impl ParamsSpec {
    /// Builds cost parameters. A scenario (from the file or `--scenario`)
    /// switches off the thresholds it does not bound and must have the
    /// thresholds it bounds.
    pub fn to_params(&self, scenario: Option<Scenario>) -> Result<CostParams, Error> {
        let mut p = CostParams::new(self.alpha, self.beta, self.gamma);
        p.default_wait = self.wait;
        p.default_late = self.late;
        p.overrides = self.overrides.clone();
        p.wait_advances_clock = self.wait_advances_clock;
        match scenario.or(self.scenario) {
            None => p.scenario = p.derived_scenario(),
            Some(s) => {
                if !s.bounds_wait() {
                    p.default_wait = f64::INFINITY;
                    p.overrides.values_mut().for_each(|t| t.wait = f64::INFINITY);
                }
                if !s.bounds_late() {
                    p.default_late = f64::INFINITY;
                    p.overrides.values_mut().for_each(|t| t.late = f64::INFINITY);
                }
                p.overrides.retain(|_, t| t.wait.is_finite() || t.late.is_finite());
                p.scenario = s;
                if p.derived_scenario() != s {
                    return Err(Error::Config(format!(
                        "scenario {s:?} needs a finite {} threshold",
                        if s.bounds_wait() && !p.derived_scenario().bounds_wait() { "waiting" } else { "lateness" }
                    )));
                }
            }
        }
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunSpec {
    #[default]
    Single,
    Persistent {
        max_rounds: usize,
        #[serde(default = "yes")]
        stop_on_period: bool,
    },
    Sweep {
        param: String,
        #[serde(default)]
        start: f64,
        #[serde(default)]
        step: f64,
        runs: usize,
        #[serde(default = "yes")]
        relocate: bool,
    },
    ThresholdSweep {
        kind: String,
        #[serde(with = "datamule::serde_ext::threshold_vec")]
        thresholds: Vec<f64>,
    },
}

impl RunSpec {
    pub fn schedule(&self) -> Result<Option<SweepSchedule>, Error> {
        match self {
            RunSpec::Sweep { param, start, step, runs, relocate } => {
                let param: SweepParam = param.parse()?;
                if *runs == 0 {
                    return Err(Error::Config("sweep runs must be at least 1".into()));
                }
                Ok(Some(SweepSchedule { param, start: *start, step: *step, runs: *runs, relocate: *relocate }))
            }
            _ => Ok(None),
        }
    }

    pub fn threshold_kind(&self) -> Result<Option<(ThresholdKind, Vec<f64>)>, Error> {
        match self {
            RunSpec::ThresholdSweep { kind, thresholds } => Ok(Some((kind.parse()?, thresholds.clone()))),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    pub max_sinks: usize,
    pub max_uavs: usize,
}

/// A config resolved into library inputs.
pub struct Resolved {
    pub network: Network,
    pub fleet: Vec<Uav>,
    pub params: CostParams,
    pub vrp: Option<VrpInstance>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn limits(&self) -> OracleLimits {
        self.oracle.map(|l| OracleLimits { max_sinks: l.max_sinks, max_uavs: l.max_uavs }).unwrap_or_default()
    }

    fn median_speed(&self) -> Option<f64> {
        let mut s: Vec<f64> = self.fleet.iter().map(|u| u.speed).collect();
        if s.is_empty() {
            return None;
        }
        s.sort_by(f64::total_cmp);
        let n = s.len();
        Some(if n % 2 == 1 { s[n / 2] } else { (s[n / 2 - 1] + s[n / 2]) / 2.0 })
    }

    fn deadlines(&self, range: Option<(f64, f64)>) -> DeadlineRange {
        match range {
            Some((lo, hi)) => DeadlineRange::Fixed(lo, hi),
            None => DeadlineRange::Auto { speed: self.median_speed().unwrap_or(500.0) },
        }
    }

    fn require_seed(&self) -> Result<u64, Error> {
        self.seed.ok_or_else(|| Error::Config("a seed is required for generated or randomised inputs".into()))
    }

    /// Builds only the network (and the VRP instance it came from, if any).
    pub fn build_network(&self) -> Result<(Network, Option<VrpInstance>), Error> {
        Ok(match &self.network {
            NetworkSource::Generate(g) => {
                let cfg = GeneratorConfig {
                    n_sinks: g.n_sinks,
                    n_bases: g.n_bases,
                    area_side: g.area_side,
                    deadline_range: self.deadlines(g.deadline_range),
                    energy_range: g.energy_range,
                    base_degree: g.base_degree,
                    energy_per_metre: g.energy_per_metre,
                    seed: self.require_seed()?,
                };
                (generate_random_network(&cfg)?, None)
            }
            NetworkSource::File { path } => (Network::load(&self.resolve_path(path))?, None),
            NetworkSource::GpsCsv(g) => {
                let opts = GpsIngestOptions {
                    origin: g.origin,
                    base_degree: g.base_degree,
                    energy_per_metre: g.energy_per_metre,
                    deadline_range: self.deadlines(g.deadline_range),
                    energy_range: g.energy_range,
                    seed: self.require_seed()?,
                };
                let bases = self.resolve_path(&g.bases);
                (ingest_gps_csv(&self.resolve_path(&g.sinks), Some(&bases), &opts)?, None)
            }
            NetworkSource::Vrp { path } => {
                let vrp = VrpInstance::load(&self.resolve_path(path))?;
                let (net, _, _) = datamule::vrp_to_datamuling(&vrp)?;
                (net, Some(vrp))
            }
        })
    }

    /// Network, fleet and parameters. A VRP source supplies its own fleet
    /// and zero-weight parameters unless the config lists a fleet.
    pub fn build(&self, scenario: Option<Scenario>) -> Result<Resolved, Error> {
        let (network, vrp) = self.build_network()?;
        let (fleet, params) = match &vrp {
            Some(v) if self.fleet.is_empty() => {
                let (_, fleet, params) = datamule::vrp_to_datamuling(v)?;
                (fleet, params)
            }
            _ => {
                if self.fleet.is_empty() {
                    return Err(Error::Config("config lists no UAVs".into()));
                }
                let fleet = self.fleet.iter().map(|u| Uav::new(u.id, u.speed, u.home_base.as_str())).collect();
                (fleet, self.params.to_params(scenario)?)
            }
        };
        Ok(Resolved { network, fleet, params, vrp })
    }
}
