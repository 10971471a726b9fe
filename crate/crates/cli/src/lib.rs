//! Command-line driver for `geonet`: Monte Carlo sweeps, analytic curves,
//! simulation-vs-analytic comparisons and single-network exports.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when a valid run
//! has to be aborted (resource limits, I/O, numerical failure).

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "geonet",
    version,
    about = "Connectivity of random geometric networks with soft connection functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo sweep; writes sweep.csv, sweep.json and a manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads (default: all available cores).
        #[arg(long, env = "GEONET_PARALLELISM")]
        parallelism: Option<NonZeroUsize>,
        /// Override the trial count of the config.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the master seed of the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate analytic formulas over a grid; writes analytic.csv.
    Analytic {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Join a sweep with analytic values; writes compare.csv and a coverage summary.
    Compare {
        /// sweep.csv (or another analytic.csv for a self-check).
        #[arg(long)]
        sim: PathBuf,
        #[arg(long)]
        analytic: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Export one network realization; writes positions.csv and edges.txt.
    RenderSample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            parallelism,
            trials,
            seed,
        } => {
            let result = commands::simulate::run(commands::simulate::SimulateArgs {
                config: &config,
                out: &out,
                parallelism: parallelism.map_or_else(default_parallelism, NonZeroUsize::get),
                trials,
                seed,
            })?;
            println!(
                "{} cells written to {}",
                result.cells.len(),
                out.join("sweep.csv").display()
            );
        }
        Command::Analytic { config, out } => {
            let rows = commands::analytic::run(&config, &out)?;
            println!(
                "{rows} rows written to {}",
                out.join("analytic.csv").display()
            );
        }
        Command::Compare { sim, analytic, out } => {
            let s = commands::compare::run(&sim, &analytic, &out)?;
            for (formula, per_eta) in &s.by_formula {
                for (eta, c) in per_eta {
                    println!(
                        "{formula} eta={eta}: {}/{} covered ({:.1}%)",
                        c.covered,
                        c.points,
                        100.0 * c.fraction
                    );
                }
            }
            println!(
                "overall: {}/{} covered ({:.1}%), max |residual| {:e}",
                s.overall.covered,
                s.overall.points,
                100.0 * s.overall.fraction,
                s.overall.max_abs_residual
            );
        }
        Command::RenderSample { config, out, seed } => {
            let r = commands::render::run(&config, &out, seed)?;
            println!(
                "{} nodes, {} edges, {} components",
                r.nodes, r.edges, r.components.count
            );
        }
    }
    Ok(())
}
