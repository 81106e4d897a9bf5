//! CSV artifacts.

use datamule::persistence::{signature, PersistentRun};
use datamule::{NodeRef, RoundResult};

fn finish(w: csv::Writer<Vec<u8>>) -> anyhow::Result<Vec<u8>> {
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn join(nodes: &[NodeRef]) -> String {
    nodes.iter().map(ToString::to_string).collect::<Vec<_>>().join(">")
}

/// One row per flown edge. `leg_energy` is the edge energy plus the visit
/// cost paid on arrival, so a UAV's rows sum to its total.
pub fn plans_csv(round: &RoundResult) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["uav", "leg_index", "from", "to", "arrival_min", "wait_min", "late_min", "leg_energy"])?;
    for plan in &round.plans {
        for (k, leg) in plan.legs.iter().enumerate() {
            w.write_record([
                plan.uav.to_string(),
                k.to_string(),
                leg.from.to_string(),
                leg.to.to_string(),
                leg.arrival.to_string(),
                leg.wait.to_string(),
                leg.late.to_string(),
                leg.energy().to_string(),
            ])?;
        }
    }
    finish(w)
}

/// Per-UAV cost breakdown plus an `ALL` row carrying Z and the unvisited
/// sinks (semicolon separated).
pub fn summary_csv(round: &RoundResult) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "uav",
        "start_base",
        "delivery_base",
        "collected",
        "launch_energy",
        "node_costs",
        "travel_energy",
        "delivery_energy",
        "total",
        "unvisited",
    ])?;
    for p in &round.plans {
        let b = &p.breakdown;
        w.write_record([
            p.uav.to_string(),
            p.start_base().to_string(),
            p.delivery_base().to_string(),
            (p.collection_path.len() - 1).to_string(),
            b.launch_energy.to_string(),
            b.node_costs.to_string(),
            b.travel_energy.to_string(),
            b.delivery_energy.to_string(),
            b.total.to_string(),
            String::new(),
        ])?;
    }
    let sum =
        |f: fn(&datamule::CostBreakdown) -> f64| round.plans.iter().map(|p| f(&p.breakdown)).sum::<f64>().to_string();
    let collected: usize = round.plans.iter().map(|p| p.collection_path.len() - 1).sum();
    w.write_record([
        "ALL".to_string(),
        String::new(),
        String::new(),
        collected.to_string(),
        sum(|b| b.launch_energy),
        sum(|b| b.node_costs),
        sum(|b| b.travel_energy),
        sum(|b| b.delivery_energy),
        round.total_z.to_string(),
        round.unvisited.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
    ])?;
    finish(w)
}

/// One row per round, numbered from 1. `same_as` names the first earlier
/// round with identical paths; the period columns use the same numbering.
pub fn rounds_csv(run: &PersistentRun) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "round",
        "total_z",
        "unvisited_count",
        "unvisited",
        "start_bases",
        "delivery_bases",
        "paths",
        "same_as",
        "period_start",
        "period_len",
    ])?;
    let sigs: Vec<_> = run.rounds.iter().map(signature).collect();
    for (k, round) in run.rounds.iter().enumerate() {
        let same_as = sigs[..k].iter().position(|s| *s == sigs[k]).map(|j| (j + 1).to_string()).unwrap_or_default();
        let bases = |f: fn(&datamule::Plan) -> &NodeRef| {
            round.plans.iter().map(|p| format!("{}:{}", p.uav, f(p))).collect::<Vec<_>>().join(";")
        };
        let paths = round
            .plans
            .iter()
            .map(|p| format!("{}:{}|{}", p.uav, join(&p.collection_path), join(&p.delivery_path)))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            (k + 1).to_string(),
            round.total_z.to_string(),
            round.unvisited.len().to_string(),
            round.unvisited.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
            bases(|p| p.start_base()),
            bases(|p| p.delivery_base()),
            paths,
            same_as,
            run.period.map(|p| (p.start + 1).to_string()).unwrap_or_default(),
            run.period.map(|p| p.length.to_string()).unwrap_or_default(),
        ])?;
    }
    finish(w)
}

pub fn key_value_csv(rows: &[(&str, String)]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["metric", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v.as_str()])?;
    }
    finish(w)
}
