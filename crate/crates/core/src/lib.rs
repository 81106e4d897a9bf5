//! Planning library for persistent, real-time data muling by a team of
//! heterogeneous UAVs over a clustered sensor network.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cost;
pub mod error;
pub mod io;
pub mod metrics;
pub mod network;
pub mod oracle;
pub mod persistence;
pub mod planner;
pub mod reduction;
pub mod serde_ext;
pub mod svg;

pub use cost::{CostBreakdown, CostParams, Leg, LegKind, NodeThresholds, Scenario, VisitOutcome};
pub use error::{Error, Result};
pub use metrics::{run_sweep, unvisited_vs_threshold, SweepParam, SweepRecord, SweepSchedule, ThresholdKind};
pub use network::{BaseStation, Network, NodeRef, Point, SinkId, SinkNode, UavEdge};
pub use oracle::{solve_exact, ExactSolution, OracleLimits};
pub use persistence::{detect_period, run_persistent, Period, PersistentConfig, PersistentRun};
pub use planner::{plan_round, plan_round_with, Plan, PlanOptions, RoundResult, Uav, UavId};
pub use reduction::{cluster_bases, invert_weights, vrp_to_datamuling, VrpInstance};
