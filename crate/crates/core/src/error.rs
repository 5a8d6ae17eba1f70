use std::io;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} is in state {state:?}; only non-infected nodes may be seeded")]
    IllegalAttempt {
        node: NodeId,
        state: crate::diffusion::NodeState,
    },

    #[error("graph has {nodes} nodes, oracle refuses more than {limit}")]
    GraphTooLarge { nodes: usize, limit: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("replication with seed {seed} failed: {source}")]
    Replication {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
