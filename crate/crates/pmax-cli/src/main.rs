//! `pmax` command line: simulate the two-layer max field, report tail
//! coefficients, estimate the tail index from a saved panel, run the
//! Monte Carlo study, and draw dependence scatter figures.

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "pmax", version, about = "Two-layer max random field toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON run configuration (required by all commands except estimate)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config's seed (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (or prefix, for figures); command-specific default
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the Monte Carlo study (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a panel and write it as `n,loc,value` CSV
    Simulate {
        /// Number of retained time steps
        #[arg(long)]
        n_time: Option<usize>,
    },
    /// Closed-form and oracle tail coefficients for a location pair, as JSON
    Coeffs {
        /// Time lag
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// First location id
        #[arg(long)]
        x: String,
        /// Second location id
        #[arg(long)]
        xp: String,
    },
    /// Estimate the tail index at one location from a field CSV
    Estimate {
        /// Input field CSV (`n,loc,value`)
        #[arg(long)]
        input: PathBuf,
        /// Location id to estimate
        #[arg(long)]
        location: String,
        /// Upper percentile bounding the evaluation grid
        #[arg(long, default_value_t = 95.0)]
        k: f64,
    },
    /// Bias/spread study of the tail index estimator, as CSV
    McTable,
    /// Pair scatter figure: full pairs as CSV plus a capped SVG
    Figures {
        /// Time lag
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// First location id
        #[arg(long)]
        x: String,
        /// Second location id
        #[arg(long)]
        xp: String,
        /// Number of retained time steps (default 10000)
        #[arg(long)]
        n_time: Option<usize>,
        /// Point cap for the SVG; the CSV always holds every pair
        #[arg(long)]
        max_points: Option<usize>,
    },
}

fn load_config(global: &GlobalArgs) -> CliResult<RunConfig> {
    let path = global
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    RunConfig::load(path)
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Compute(format!("thread pool setup failed: {e}")))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Simulate { n_time } => {
            let cfg = load_config(g)?;
            commands::cmd_simulate(&cfg, *n_time, g.seed, g.out.clone())
        }
        Command::Coeffs { r, x, xp } => {
            let cfg = load_config(g)?;
            commands::cmd_coeffs(&cfg, *r, x, xp, g.out.clone())
        }
        Command::Estimate { input, location, k } => {
            commands::cmd_estimate(input, location, *k, g.out.clone())
        }
        Command::McTable => {
            let cfg = load_config(g)?;
            commands::cmd_mc_table(&cfg, g.seed, g.out.clone())
        }
        Command::Figures { r, x, xp, n_time, max_points } => {
            let cfg = load_config(g)?;
            commands::cmd_figures(&cfg, *r, x, xp, *n_time, *max_points, g.seed, g.out.clone())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
