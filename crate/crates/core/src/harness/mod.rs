//! Replicated experiments: configuration, parallel replication, sweeps and
//! aggregation.

pub mod aggregate;
pub mod config;
pub mod replicate;
pub mod sweep;

pub use aggregate::{
    ci95_half_width, mean_std, read_aggregate_csv, relative_improvement, write_aggregate_csv,
    AggregateRow, AGGREGATE_HEADER,
};
pub use config::ExperimentConfig;
pub use replicate::{run_replications, with_workers, Replication, RunSummary};
pub use sweep::{run_sweep, CellResult, SweepOptions, SweepResult};
