use std::path::PathBuf;

use thiserror::Error;

use crate::network::NodeRef;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("{path}:{line}: {message}")]
    Ingest { path: PathBuf, line: usize, message: String },

    #[error("unknown node {0}")]
    UnknownNode(NodeRef),

    #[error("no UAV path from {from} to {to}")]
    NoPath { from: NodeRef, to: NodeRef },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(
        "instance too large for exhaustive search ({sinks} sinks, {uavs} UAVs; limits are {max_sinks} sinks, {max_uavs} UAVs)"
    )]
    OracleRefused { sinks: usize, uavs: usize, max_sinks: usize, max_uavs: usize },

    #[error("planner exceeded its iteration bound of {0}")]
    IterationBound(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
