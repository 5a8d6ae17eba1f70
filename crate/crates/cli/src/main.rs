use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use lvm_cli::commands::{self, Mode};
use lvm_cli::dataset;
use lvm_core::graph::{DEFAULT_CENTRALITY_MAX_ITER, DEFAULT_CENTRALITY_TOL};
use lvm_core::harness::SweepOptions;

/// Latent viral marketing simulator.
#[derive(Parser)]
#[command(name = "lvm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CacheArg {
    /// Dataset cache directory [default: $LVM_CACHE or ./data]
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also write per-attempt traces (attempts.csv)
    #[arg(long)]
    trace: bool,
    /// Record wall-clock run times in the aggregate
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    cache: CacheArg,
}

#[derive(Subcommand)]
enum Command {
    /// Download and verify a dataset
    Fetch {
        #[arg(long)]
        dataset: String,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Node count, edge count, average degree and clustering
    NetStats {
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        dataset: Option<String>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Run a single configuration
    Run(ExperimentArgs),
    /// Sweep one parameter over all methods
    Sweep(ExperimentArgs),
    /// Eigenvector centrality of every node
    Centrality {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CENTRALITY_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_CENTRALITY_MAX_ITER)]
        max_iter: usize,
    },
}

fn experiment(mode: Mode, a: ExperimentArgs) -> Result<()> {
    let opts = SweepOptions {
        workers: a.workers,
        trace: a.trace,
        timing: a.timing,
    };
    let cache = dataset::cache_dir(a.cache.cache.as_deref());
    let result = commands::experiment(mode, &a.config, &a.out, &cache, &opts)?;
    commands::print_rows(&result);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fetch { dataset: name, cache } => {
            let r = dataset::lookup(&name)
                .ok_or_else(|| anyhow::anyhow!("unknown dataset {name:?}"))?;
            let path = dataset::fetch_dataset(&r, &dataset::cache_dir(cache.cache.as_deref()))?;
            println!("{}", path.display());
        }
        Command::NetStats {
            dataset: name,
            edges,
            cache,
        } => {
            let cache = dataset::cache_dir(cache.cache.as_deref());
            let (label, net) = commands::load(name.as_deref(), edges.as_deref(), &cache)?;
            print!("{}", commands::stats_csv(&label, &commands::net_stats(&net)?));
        }
        Command::Run(a) => experiment(Mode::Run, a)?,
        Command::Sweep(a) => experiment(Mode::Sweep, a)?,
        Command::Centrality {
            edges,
            out,
            tol,
            max_iter,
        } => {
            let net = dataset::load_file(&edges)?;
            let c = commands::write_centrality(&net, &out, tol, max_iter)?;
            if !c.converged {
                eprintln!(
                    "warning: not converged after {} iterations (residual {:e})",
                    c.iterations, c.residual
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
