//! Latent viral marketing: a seeding-campaign simulator on social graphs
//! and the policies that decide whom to offer a product to, period by
//! period, under a fixed budget.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: edge-list parsing, induced sampling, eigenvector centrality
//!   and clustering statistics.
//! * [`diffusion`]: node lifecycle and acceptance probability.
//! * [`strategies`]: random, centrality and social seeders.
//! * [`sim`]: a single campaign and its trace.
//! * [`harness`]: replications, sweeps and CSV aggregation.

pub mod diffusion;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod sim;
pub mod strategies;

pub use diffusion::{infection_probability, DiffusionState, NodeParams, NodeState};
pub use error::{Error, Result};
pub use graph::{
    build_graph, eigenvector_centrality, graph_stats, parse_edge_list, raw_node_ids, sample_induced,
    CentralityVector, Graph, GraphStats, NodeId,
};
pub use sim::{
    cumulative_success_curve, mean_seeded_centrality, run_simulation, AttemptRecord, ParamSpec,
    SimConfig, SimTrace, Termination,
};
pub use strategies::{
    candidate_set, draw_estimates, select, social_score, ParamDistribution, ParamView,
    SeederKind, Seeder, ViewMode,
};
