//! Experimental observables: cost per run under a parameter sweep, and
//! unvisited sink counts against a threshold grid.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::network::{Network, SinkNode};
use crate::persistence::{detect_period, relocate, signature, Period};
use crate::planner::{plan_round_with, PlanOptions, RoundResult, Uav, UavId};

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Alpha,
    Beta,
    Gamma,
    /// Every UAV flies at the swept speed.
    Speed,
    None,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Gamma => "gamma",
            SweepParam::Speed => "speed",
            SweepParam::None => "none",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "alpha" => SweepParam::Alpha,
            "beta" => SweepParam::Beta,
            "gamma" => SweepParam::Gamma,
            "speed" => SweepParam::Speed,
            "none" | "" => SweepParam::None,
            other => return Err(Error::Config(format!("unknown sweep parameter {other:?}"))),
        })
    }
}

/// Run `k` uses `start + k * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSchedule {
    pub param: SweepParam,
    pub start: f64,
    pub step: f64,
    pub runs: usize,
    /// Start each run from the previous run's delivery bases.
    #[serde(default = "yes")]
    pub relocate: bool,
}

fn yes() -> bool {
    true
}

impl SweepSchedule {
    pub fn value(&self, run: usize) -> f64 {
        self.start + run as f64 * self.step
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub run_index: usize,
    pub param_name: SweepParam,
    pub param_value: f64,
    pub per_uav_cost: BTreeMap<UavId, f64>,
    pub average_cost: f64,
    pub unvisited_count: usize,
    /// Periodicity of the path sequence observed up to this run.
    pub period: Option<Period>,
}

fn apply(param: SweepParam, value: f64, params: &CostParams, fleet: &mut [Uav]) -> CostParams {
    let mut p = params.clone();
    match param {
        SweepParam::Alpha => p.alpha = value,
        SweepParam::Beta => p.beta = value,
        SweepParam::Gamma => p.gamma = value,
        SweepParam::Speed => fleet.iter_mut().for_each(|u| u.speed = value),
        SweepParam::None => {}
    }
    p
}

/// Like [`run_sweep`], also returning each run's round.
pub fn run_sweep_rounds(
    net: &Network,
    fleet: &[Uav],
    base_params: &CostParams,
    schedule: &SweepSchedule,
) -> Result<Vec<(SweepRecord, RoundResult)>> {
    if schedule.runs == 0 {
        return Err(Error::Config("a sweep needs at least one run".into()));
    }
    let mut current = fleet.to_vec();
    let mut sigs = Vec::with_capacity(schedule.runs);
    let mut out = Vec::with_capacity(schedule.runs);
    for run in 0..schedule.runs {
        let value = schedule.value(run);
        let mut uavs = current.clone();
        let params = apply(schedule.param, value, base_params, &mut uavs);
        let opts = PlanOptions { enforce_capacity: run == 0 || !schedule.relocate };
        let round = plan_round_with(net, &uavs, &params, &opts)?;
        sigs.push(signature(&round));
        let per_uav_cost: BTreeMap<UavId, f64> = round.plans.iter().map(|p| (p.uav, p.breakdown.total)).collect();
        let average_cost = per_uav_cost.values().sum::<f64>() / per_uav_cost.len() as f64;
        let record = SweepRecord {
            run_index: run,
            param_name: schedule.param,
            param_value: value,
            per_uav_cost,
            average_cost,
            unvisited_count: round.unvisited.len(),
            period: detect_period(&sigs),
        };
        if schedule.relocate {
            current = relocate(&current, &round);
        }
        out.push((record, round));
    }
    Ok(out)
}

/// Runs `schedule.runs` rounds, varying one parameter per run. Runs chain
/// through relocation unless `schedule.relocate` is off.
pub fn run_sweep(
    net: &Network,
    fleet: &[Uav],
    base_params: &CostParams,
    schedule: &SweepSchedule,
) -> Result<Vec<SweepRecord>> {
    Ok(run_sweep_rounds(net, fleet, base_params, schedule)?.into_iter().map(|(r, _)| r).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    Late,
    Waiting,
}

impl FromStr for ThresholdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "late" => Ok(ThresholdKind::Late),
            "waiting" | "wait" => Ok(ThresholdKind::Waiting),
            other => Err(Error::Config(format!("unknown threshold kind {other:?}"))),
        }
    }
}

/// The network and parameters for one point of a threshold curve.
///
/// `Late` bounds lateness by `threshold` at every sink. `Waiting` treats the
/// threshold as the waiting time the sinks impose: every revisit deadline is
/// set to `threshold` and no waiting is tolerated, so a sink can only be
/// collected by a UAV arriving at or after that time.
pub fn threshold_instance(
    net: &Network,
    params: &CostParams,
    threshold: f64,
    kind: ThresholdKind,
) -> Result<(Network, CostParams)> {
    match kind {
        ThresholdKind::Late => Ok((net.clone(), params.clone().with_late_threshold(threshold))),
        ThresholdKind::Waiting => {
            if !(threshold >= 0.0) || !threshold.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "waiting threshold must be finite and non-negative, got {threshold}"
                )));
            }
            let sinks: Vec<SinkNode> =
                net.sinks().iter().map(|s| SinkNode { revisit_deadline: threshold, ..s.clone() }).collect();
            let shifted = Network::new(sinks, net.bases().to_vec(), net.edges().to_vec())?
                .with_wireless_links(net.wireless_links().to_vec(), net.sensor_nodes().to_vec());
            Ok((shifted, params.clone().with_wait_threshold(0.0)))
        }
    }
}

/// One round per threshold; returns `(threshold, unvisited count)` in input
/// order. Points are planned in parallel.
pub fn unvisited_vs_threshold(
    net: &Network,
    fleet: &[Uav],
    params: &CostParams,
    thresholds: &[f64],
    kind: ThresholdKind,
) -> Result<Vec<(f64, usize)>> {
    if thresholds.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("thresholds must be sorted ascending".into()));
    }
    thresholds
        .par_iter()
        .map(|&t| {
            let (n, p) = threshold_instance(net, params, t, kind)?;
            let round = plan_round_with(&n, fleet, &p, &PlanOptions::default())?;
            Ok((t, round.unvisited.len()))
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 9] =
    ["run", "param_name", "param_value", "uav_id", "uav_cost", "avg_cost", "unvisited", "period_start", "period_len"];

#[derive(Debug, Serialize, Deserialize)]
struct SweepRow {
    run: usize,
    param_name: String,
    param_value: f64,
    uav_id: UavId,
    uav_cost: f64,
    avg_cost: f64,
    unvisited: usize,
    period_start: Option<usize>,
    period_len: Option<usize>,
}

/// One row per (run, UAV).
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in records {
        for (&uav, &cost) in &r.per_uav_cost {
            w.write_record([
                r.run_index.to_string(),
                r.param_name.to_string(),
                r.param_value.to_string(),
                uav.to_string(),
                cost.to_string(),
                r.average_cost.to_string(),
                r.unvisited_count.to_string(),
                r.period.map(|p| p.start.to_string()).unwrap_or_default(),
                r.period.map(|p| p.length.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut records: Vec<SweepRecord> = Vec::new();
    for row in rdr.deserialize() {
        let row: SweepRow = row?;
        let period = match (row.period_start, row.period_len) {
            (Some(start), Some(length)) => Some(Period { start, length }),
            _ => None,
        };
        match records.last_mut() {
            Some(last) if last.run_index == row.run => {
                last.per_uav_cost.insert(row.uav_id, row.uav_cost);
            }
            _ => records.push(SweepRecord {
                run_index: row.run,
                param_name: row.param_name.parse()?,
                param_value: row.param_value,
                per_uav_cost: [(row.uav_id, row.uav_cost)].into(),
                average_cost: row.avg_cost,
                unvisited_count: row.unvisited,
                period,
            }),
        }
    }
    Ok(records)
}

pub fn write_threshold_csv<W: Write>(kind: ThresholdKind, points: &[(f64, usize)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "threshold", "unvisited"])?;
    let kind = match kind {
        ThresholdKind::Late => "late",
        ThresholdKind::Waiting => "waiting",
    };
    for (t, c) in points {
        w.write_record([kind.to_string(), crate::serde_ext::format_threshold(*t), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
