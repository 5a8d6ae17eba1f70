use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CentralityVector, Graph, NodeId};
use crate::sim::{
    cumulative_success_curve, mean_seeded_centrality, run_simulation, SimConfig, SimTrace,
    Termination,
};

/// Per-replication summary kept after the trace is dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub replication: usize,
    pub seed: u64,
    pub attempts: usize,
    pub successes: usize,
    pub success_ratio: f64,
    pub fallback_rate: f64,
    /// Mean centrality over all attempts; `None` without attempts.
    pub mean_seeded_centrality: Option<f64>,
    pub periods_elapsed: i64,
    pub terminated_by: Termination,
    pub pre_seeded: Vec<NodeId>,
    pub params_fingerprint: u64,
    /// Cumulative success ratio at the end of each period with attempts.
    pub curve: Vec<(i64, f64)>,
    /// `(period, centrality)` of every attempted node.
    pub seeded: Vec<(i64, f64)>,
    /// Wall-clock time of the run; never written unless timing is requested.
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl RunSummary {
    fn from_trace(replication: usize, seed: u64, trace: &SimTrace, runtime_ms: f64) -> Self {
        RunSummary {
            replication,
            seed,
            attempts: trace.attempts.len(),
            successes: trace.successes,
            success_ratio: trace.success_ratio,
            fallback_rate: trace.fallback_rate(),
            mean_seeded_centrality: mean_seeded_centrality(trace, i64::MIN..=i64::MAX).ok(),
            periods_elapsed: trace.periods_elapsed,
            terminated_by: trace.terminated_by,
            pre_seeded: trace.pre_seeded.clone(),
            params_fingerprint: trace.params_fingerprint,
            curve: cumulative_success_curve(trace),
            seeded: trace
                .attempts
                .iter()
                .map(|a| (a.period, a.node_centrality))
                .collect(),
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub summary: RunSummary,
    pub trace: Option<SimTrace>,
}

/// Runs `n_reps` copies of `template`, replication `i` seeded with
/// `seed_base + i`, in parallel. Results are ordered by replication index.
pub fn run_replications(
    template: &SimConfig,
    n_reps: usize,
    seed_base: u64,
    g: &Graph,
    centrality: &CentralityVector,
    keep_traces: bool,
) -> Result<Vec<Replication>> {
    if n_reps == 0 {
        return Err(Error::invalid("replications must be at least 1"));
    }
    let results: Vec<Result<Replication>> = (0..n_reps)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i as u64);
            let cfg = SimConfig {
                rng_seed: seed,
                ..template.clone()
            };
            let start = Instant::now();
            let trace = run_simulation(&cfg, g, centrality).map_err(|e| Error::Replication {
                seed,
                source: Box::new(e),
            })?;
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(Replication {
                summary: RunSummary::from_trace(i, seed, &trace, runtime_ms),
                trace: keep_traces.then_some(trace),
            })
        })
        .collect();
    results.into_iter().collect()
}

/// Runs `f` on a pool of `workers` threads, or the global pool for `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("workers must be at least 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
