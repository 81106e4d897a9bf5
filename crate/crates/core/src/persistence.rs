//! Persistent visitation: repeated rounds where every UAV takes off from the
//! base station it delivered to in the previous round.
//!
//! Planning is deterministic and the only state carried between rounds is
//! the tuple of start bases, so the sequence of rounds is eventually
//! periodic.

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::network::{Network, NodeRef};
use crate::planner::{plan_round_with, PlanOptions, RoundResult, Uav, UavId};

/// Canonical description of a round's paths: per UAV, sorted by id, its
/// collection path and delivery path.
pub type RoundSignature = Vec<(UavId, Vec<NodeRef>, Vec<NodeRef>)>;

pub fn signature(round: &RoundResult) -> RoundSignature {
    let mut sig: RoundSignature =
        round.plans.iter().map(|p| (p.uav, p.collection_path.clone(), p.delivery_path.clone())).collect();
    sig.sort_by_key(|s| s.0);
    sig
}

/// Rounds `k >= start` repeat with the given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub start: usize,
    pub length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistentConfig {
    pub max_rounds: usize,
    /// Stop as soon as a repetition is observed.
    pub stop_on_period: bool,
}

impl PersistentConfig {
    pub fn new(max_rounds: usize) -> Self {
        PersistentConfig { max_rounds, stop_on_period: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistentRun {
    pub rounds: Vec<RoundResult>,
    /// Fleet state at the start of each round.
    pub fleets: Vec<Vec<Uav>>,
    pub period: Option<Period>,
    pub config: PersistentConfig,
}

/// Smallest `(start, length)` such that `signatures[k] == signatures[k + length]`
/// for every `k >= start` inside the window, with at least one such `k`.
/// The smallest start wins, then the smallest length.
pub fn detect_period<T: PartialEq>(signatures: &[T]) -> Option<Period> {
    let n = signatures.len();
    for start in 0..n.saturating_sub(1) {
        for length in 1..n - start {
            if (start..n - length).all(|k| signatures[k] == signatures[k + length]) {
                return Some(Period { start, length });
            }
        }
    }
    None
}

/// Moves every UAV to the base it delivered to and adds the round's energy
/// to its running total.
pub fn relocate(fleet: &[Uav], round: &RoundResult) -> Vec<Uav> {
    fleet
        .iter()
        .map(|u| {
            let mut next = u.clone();
            if let Some(plan) = round.plan_for(u.id) {
                if let NodeRef::Base(b) = plan.delivery_base() {
                    next.home_base = b.clone();
                }
                next.energy_spent += plan.breakdown.total;
            }
            next
        })
        .collect()
}

/// Runs up to `config.max_rounds` rounds. Base capacities are only checked
/// for the initial fleet: relocated UAVs may share a base beyond capacity.
pub fn run_persistent(
    net: &Network,
    fleet: &[Uav],
    params: &CostParams,
    config: PersistentConfig,
) -> Result<PersistentRun> {
    if config.max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    let mut fleet = fleet.to_vec();
    let mut rounds = Vec::new();
    let mut fleets = Vec::new();
    let mut sigs = Vec::new();
    for k in 0..config.max_rounds {
        let opts = PlanOptions { enforce_capacity: k == 0 };
        let round = plan_round_with(net, &fleet, params, &opts)?;
        sigs.push(signature(&round));
        let next = relocate(&fleet, &round);
        fleets.push(std::mem::replace(&mut fleet, next));
        rounds.push(round);
        if config.stop_on_period && sigs.len() >= 2 && sigs[..sigs.len() - 1].contains(sigs.last().unwrap()) {
            break;
        }
    }
    Ok(PersistentRun { period: detect_period(&sigs), rounds, fleets, config })
}
