//! One-dimension-at-a-time parameter sweeps and their CSV outputs.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::aggregate::{fmt_sig9, mean_std, write_aggregate_csv, AggregateRow};
use super::config::ExperimentConfig;
use super::replicate::{run_replications, with_workers, RunSummary};
use crate::error::{Error, Result};
use crate::graph::{
    eigenvector_centrality, sample_induced, CentralityVector, Graph, DEFAULT_CENTRALITY_MAX_ITER,
    DEFAULT_CENTRALITY_TOL,
};
use crate::rng::{stream, Stream};
use crate::sim::SimTrace;
use crate::strategies::SeederKind;

pub const ATTEMPTS_HEADER: &str =
    "run_id,method,period,node_id,centrality,n_plus,probability,success,fallback";
pub const RUNS_HEADER: &str = "method,dimension,value,replication,seed,attempts,successes,success_ratio,fallback_rate,mean_seeded_centrality";
pub const CUMULATIVE_HEADER: &str =
    "method,dimension,value,period,replications,mean_cumulative_success_ratio";
pub const SEEDED_CENTRALITY_HEADER: &str = "method,dimension,value,period,attempts,mean_centrality";

/// Dimension label used for single-cell runs.
pub const NO_DIMENSION: &str = "none";

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub workers: Option<usize>,
    /// Write per-attempt traces.
    pub trace: bool,
    /// Record wall-clock times (makes outputs non-reproducible).
    pub timing: bool,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub method: SeederKind,
    pub value: Option<f64>,
    pub row: AggregateRow,
    pub summaries: Vec<RunSummary>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub dimension: String,
    pub cells: Vec<CellResult>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<AggregateRow> {
        self.cells.iter().map(|c| c.row.clone()).collect()
    }

    pub fn cell(&self, method: SeederKind, value: Option<f64>) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.value == value)
    }
}

#[derive(Debug, Serialize)]
struct NetworkInfo {
    sample_size: Option<usize>,
    nodes: usize,
    edges: usize,
    centrality_iterations: usize,
    centrality_residual: f64,
    centrality_converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    centrality_ms: Option<f64>,
}

struct PreparedNetwork {
    graph: Graph,
    centrality: CentralityVector,
    info: NetworkInfo,
}

fn prepare(base: &Graph, sample_size: Option<usize>, seed: u64, timing: bool) -> Result<PreparedNetwork> {
    let graph = match sample_size {
        Some(k) if k != base.node_count() => {
            sample_induced(base, k, &mut stream(seed, Stream::GraphSample))?
        }
        _ => base.clone(),
    };
    let start = Instant::now();
    let centrality = eigenvector_centrality(&graph, DEFAULT_CENTRALITY_TOL, DEFAULT_CENTRALITY_MAX_ITER)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let info = NetworkInfo {
        sample_size,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        centrality_iterations: centrality.iterations,
        centrality_residual: centrality.residual,
        centrality_converged: centrality.converged,
        centrality_ms: timing.then_some(elapsed),
    };
    Ok(PreparedNetwork {
        graph,
        centrality,
        info,
    })
}

/// Runs the sweep described by `cfg` (or a single cell when it has no
/// `dimension`) on `base` and writes all outputs into `out_dir`.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    base: &Graph,
    out_dir: &Path,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let (dimension, values) = match &cfg.dimension {
        Some(d) => {
            let values = cfg.values.clone().unwrap_or_default();
            if values.is_empty() {
                return Err(Error::invalid("sweep values are empty"));
            }
            (d.clone(), values.into_iter().map(Some).collect::<Vec<_>>())
        }
        None => (NO_DIMENSION.to_string(), vec![None]),
    };
    if cfg.replications == 0 {
        return Err(Error::invalid("replications must be at least 1"));
    }
    // resolve every cell before doing any work
    // methods are resolved per cell so a bare "social" follows a swept depth
    let cell_cfgs: Vec<(Option<f64>, ExperimentConfig, Vec<SeederKind>)> = values
        .iter()
        .map(|&v| {
            let c = match v {
                Some(x) => cfg.with_dimension(&dimension, x)?,
                None => cfg.clone(),
            };
            let methods = match (&c.dimension, &c.methods) {
                (None, None) => vec![c.seeder()?],
                _ => c.sweep_methods()?,
            };
            Ok((v, c, methods))
        })
        .collect::<Result<_>>()?;

    fs::create_dir_all(out_dir)?;
    let mut outputs = Outputs::create(out_dir, opts.trace)?;
    let mut networks: BTreeMap<Option<usize>, PreparedNetwork> = BTreeMap::new();
    let mut cells = Vec::new();

    for (value_index, (value, cell_cfg, methods)) in cell_cfgs.iter().enumerate() {
        if let Entry::Vacant(slot) = networks.entry(cell_cfg.sample_size) {
            slot.insert(prepare(base, cell_cfg.sample_size, cfg.seed, opts.timing)?);
        }
        let net = &networks[&cell_cfg.sample_size];
        for &method in methods {
            let template = cell_cfg.sim_config(method);
            let reps = with_workers(opts.workers, || {
                run_replications(
                    &template,
                    cell_cfg.replications,
                    cell_cfg.seed,
                    &net.graph,
                    &net.centrality,
                    opts.trace,
                )
            })??;
            let label = method.to_string();
            let ratios: Vec<f64> = reps.iter().map(|r| r.summary.success_ratio).collect();
            let fallbacks: Vec<f64> = reps.iter().map(|r| r.summary.fallback_rate).collect();
            let runtimes: Vec<f64> = reps.iter().map(|r| r.summary.runtime_ms).collect();
            let row = AggregateRow::from_ratios(
                &label,
                &dimension,
                *value,
                &ratios,
                &fallbacks,
                opts.timing.then_some(&runtimes[..]),
            );
            if let Some(out) = outputs.attempts.as_mut() {
                for r in &reps {
                    let run_id = value_index * cell_cfg.replications + r.summary.replication;
                    write_attempts(out, run_id, &label, r.trace.as_ref().expect("traces kept"))?;
                }
            }
            let summaries: Vec<RunSummary> = reps.into_iter().map(|r| r.summary).collect();
            outputs.write_cell(&label, &dimension, *value, &summaries)?;
            cells.push(CellResult {
                method,
                value: *value,
                row,
                summaries,
            });
        }
    }

    let rows: Vec<AggregateRow> = cells.iter().map(|c| c.row.clone()).collect();
    write_aggregate_csv(BufWriter::new(File::create(out_dir.join("aggregate.csv"))?), &rows)?;
    outputs.finish()?;
    let infos: Vec<&NetworkInfo> = networks.values().map(|n| &n.info).collect();
    fs::write(
        out_dir.join("network.json"),
        serde_json::to_string_pretty(&infos)? + "\n",
    )?;
    Ok(SweepResult { dimension, cells })
}

struct Outputs {
    runs: BufWriter<File>,
    cumulative: BufWriter<File>,
    centrality: BufWriter<File>,
    attempts: Option<BufWriter<File>>,
}

impl Outputs {
    fn create(dir: &Path, trace: bool) -> Result<Self> {
        let open = |name: &str, header: &str| -> Result<BufWriter<File>> {
            let path: PathBuf = dir.join(name);
            let mut w = BufWriter::new(File::create(path)?);
            writeln!(w, "{header}")?;
            Ok(w)
        };
        Ok(Outputs {
            runs: open("runs.csv", RUNS_HEADER)?,
            cumulative: open("cumulative.csv", CUMULATIVE_HEADER)?,
            centrality: open("seeded_centrality.csv", SEEDED_CENTRALITY_HEADER)?,
            attempts: if trace {
                Some(open("attempts.csv", ATTEMPTS_HEADER)?)
            } else {
                None
            },
        })
    }

    fn write_cell(
        &mut self,
        method: &str,
        dimension: &str,
        value: Option<f64>,
        summaries: &[RunSummary],
    ) -> Result<()> {
        let value = value.map(fmt_sig9).unwrap_or_default();
        for s in summaries {
            writeln!(
                self.runs,
                "{method},{dimension},{value},{},{},{},{},{},{},{}",
                s.replication,
                s.seed,
                s.attempts,
                s.successes,
                fmt_sig9(s.success_ratio),
                fmt_sig9(s.fallback_rate),
                s.mean_seeded_centrality.map(fmt_sig9).unwrap_or_default(),
            )?;
        }
        let mut by_period: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
        for s in summaries {
            for &(period, ratio) in &s.curve {
                by_period.entry(period).or_default().push(ratio);
            }
        }
        for (period, ratios) in by_period {
            writeln!(
                self.cumulative,
                "{method},{dimension},{value},{period},{},{}",
                ratios.len(),
                fmt_sig9(mean_std(&ratios).0)
            )?;
        }
        let mut seeded: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
        for s in summaries {
            for &(period, c) in &s.seeded {
                seeded.entry(period).or_default().push(c);
            }
        }
        for (period, cs) in seeded {
            writeln!(
                self.centrality,
                "{method},{dimension},{value},{period},{},{}",
                cs.len(),
                fmt_sig9(mean_std(&cs).0)
            )?;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.runs.flush()?;
        self.cumulative.flush()?;
        self.centrality.flush()?;
        if let Some(a) = self.attempts.as_mut() {
            a.flush()?;
        }
        Ok(())
    }
}

fn write_attempts<W: Write>(out: &mut W, run_id: usize, method: &str, trace: &SimTrace) -> Result<()> {
    for a in &trace.attempts {
        writeln!(
            out,
            "{run_id},{method},{},{},{},{},{},{},{}",
            a.period,
            a.node,
            fmt_sig9(a.node_centrality),
            a.n_plus_at_attempt,
            fmt_sig9(a.probability_used),
            a.success as u8,
            a.fallback as u8,
        )?;
    }
    Ok(())
}
