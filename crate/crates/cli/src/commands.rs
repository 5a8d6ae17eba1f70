use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lvm_core::harness::aggregate::fmt_sig9;
use lvm_core::harness::{run_sweep, ExperimentConfig, SweepOptions, SweepResult};
use lvm_core::{eigenvector_centrality, graph_stats, CentralityVector, GraphStats};

use crate::dataset::{self, Network};

pub const STATS_HEADER: &str = "network,n,edge_count,avg_degree,avg_clustering";
pub const CENTRALITY_HEADER: &str = "node_id,centrality";

pub fn stats_csv(label: &str, s: &GraphStats) -> String {
    format!(
        "{STATS_HEADER}\n{label},{},{},{},{}\n",
        s.n,
        s.edge_count,
        fmt_sig9(s.avg_degree),
        fmt_sig9(s.avg_clustering)
    )
}

/// Loads either a dataset by name or an edge-list file.
pub fn load(dataset: Option<&str>, edges: Option<&Path>, cache: &Path) -> Result<(String, Network)> {
    match (dataset, edges) {
        (Some(name), None) => {
            let r = dataset::lookup(name).with_context(|| format!("unknown dataset {name:?}"))?;
            let path = dataset::fetch_dataset(&r, cache)?;
            Ok((r.name, dataset::load_file(&path)?))
        }
        (None, Some(path)) => Ok((path.display().to_string(), dataset::load_file(path)?)),
        _ => bail!("give exactly one of --dataset or --edges"),
    }
}

pub fn net_stats(net: &Network) -> Result<GraphStats> {
    Ok(graph_stats(&net.graph)?)
}

/// Writes `node_id,centrality` rows keyed by raw node id.
pub fn write_centrality(net: &Network, out: &Path, tol: f64, max_iter: usize) -> Result<CentralityVector> {
    let c = eigenvector_centrality(&net.graph, tol, max_iter)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    writeln!(w, "{CENTRALITY_HEADER}")?;
    for (raw, score) in net.raw_ids.iter().zip(&c.scores) {
        writeln!(w, "{raw},{}", fmt_sig9(*score))?;
    }
    w.flush()?;
    Ok(c)
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A relative `network` path is looked up next to the config file when it
/// does not exist relative to the working directory.
pub fn resolve_network(cfg: &ExperimentConfig, config_path: &Path) -> String {
    if dataset::lookup(&cfg.network).is_some() || Path::new(&cfg.network).exists() {
        return cfg.network.clone();
    }
    let beside: PathBuf = config_path
        .parent()
        .unwrap_or(Path::new("."))
        .join(&cfg.network);
    if beside.exists() {
        beside.display().to_string()
    } else {
        cfg.network.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    Sweep,
}

/// `lvm run` takes a single cell, `lvm sweep` a dimension with values.
pub fn experiment(
    mode: Mode,
    config_path: &Path,
    out: &Path,
    cache: &Path,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let cfg = read_config(config_path)?;
    match (mode, &cfg.dimension) {
        (Mode::Run, Some(d)) => bail!("config sweeps {d:?}; use `lvm sweep`"),
        (Mode::Sweep, None) => bail!("config has no \"dimension\" to sweep; use `lvm run`"),
        _ => {}
    }
    let network = resolve_network(&cfg, config_path);
    let net = dataset::load_network(&network, cache)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let result = run_sweep(&cfg, &net.graph, out, opts)?;
    fs::write(out.join("config.json"), serde_json::to_string_pretty(&cfg)? + "\n")?;
    Ok(result)
}

pub fn print_rows(result: &SweepResult) {
    for row in result.rows() {
        let value = row.value.map(fmt_sig9).unwrap_or_else(|| "-".into());
        println!(
            "{:<14} {}={:<12} success {:.4} ± {:.4}  fallback {:.3}",
            row.method,
            row.dimension,
            value,
            row.mean_success_ratio,
            row.ci95_half_width,
            row.mean_fallback_rate
        );
    }
}
