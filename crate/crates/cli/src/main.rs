mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};

/// Closed-form J2 satellite theory: propagation, comparison against a
/// numerical truth, self-verification and benchmarks. CSV goes to stdout
/// unless the configuration names an output file.
#[derive(Debug, Parser)]
#[command(name = "brouwer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; the built-in Topex example when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Theory variant such as `2+:2:2`. Repeat to list the curves for
    /// `compare`; the first one is propagated.
    #[arg(long = "variant", global = true)]
    variants: Vec<String>,

    /// Propagation span in days.
    #[arg(long, global = true)]
    days: Option<f64>,

    /// Oracle integration tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Osculating Cartesian ephemeris of one variant.
    Propagate,
    /// Position error of each variant against the numerical truth.
    Compare,
    /// Check every series against its independent oracle.
    Verify,
    /// Time the periodic corrections.
    Bench,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        variants: cli.variants,
        days: cli.days,
        tol: cli.tol,
    };
    let result = RunConfig::load(cli.config.as_deref(), &overrides).and_then(|cfg| match cli.command {
        Command::Propagate => commands::propagate(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Bench => commands::bench(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("brouwer: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
