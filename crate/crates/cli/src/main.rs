//! `targetzone`: scenario files in, figure data out.

mod commands;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use scenario::{Format, Invalid, Scenario};

#[derive(Parser, Debug)]
#[command(name = "targetzone", version, about = "Finite-horizon target-zone solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario JSON file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; defaults to the scenario's `outputs.path`, then stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; never changes the numbers.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Eigenvalues with their brackets and regime.
    Spectrum,
    /// Stationary curves X_S(f).
    Stationary,
    /// Surface X(t, f).
    Transient,
    /// Relaxation time, bounds and feasibility.
    Feasibility,
    /// Spectral gap along a risk grid.
    RegimeScan,
    /// Fundamental and exchange-rate paths.
    Simulate,
    /// Binned densities with shape classification.
    Density,
    /// Contact-point report.
    Honeymoon,
    /// Mean-reverting stationary curve and asymptotic spectrum.
    Ou,
}

fn run(cli: &Cli) -> Result<()> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Invalid("--config <path> is required".into()))?;
    let mut sc = Scenario::load(path)?;
    if let Some(seed) = cli.seed {
        sc.sim.seed = seed;
    }
    let format = cli.format.unwrap_or(sc.outputs.format);
    let out = cli.out.clone().or_else(|| sc.outputs.path.clone());
    let doc = match cli.command {
        Command::Spectrum => commands::spectrum(&sc, format),
        Command::Stationary => commands::stationary(&sc, format),
        Command::Transient => commands::transient(&sc, format),
        Command::Feasibility => commands::feasibility(&sc, format),
        Command::RegimeScan => commands::regime_scan_cmd(&sc, format),
        Command::Simulate => commands::simulate_cmd(&sc, format),
        Command::Density => commands::density(&sc, format),
        Command::Honeymoon => commands::honeymoon(&sc, format),
        Command::Ou => commands::ou(&sc, format),
    }?;
    output::write_atomic(out.as_deref(), &doc).context("writing output")
}

/// 2 for invalid input, 3 for numerical failure, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Invalid>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<targetzone::Error>() {
            return if e.is_validation() { 2 } else { 3 };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building the thread pool")
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
