//! Binary entry point: argument parsing and exit-status mapping.
//!
//! Exit statuses: 0 on success, 2 for configuration errors (including usage
//! errors, which clap also reports with status 2), 3 for runtime failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coupline_cli::commands::{self, Which};
use coupline_cli::config::ConfigFile;
use coupline_cli::CliError;

/// Coupled-line bandpass filter toolkit: synthesize a design, sweep its
/// S-parameters, and place open stubs that suppress the harmonic passbands.
#[derive(Debug, Parser)]
#[command(name = "coupline", version, arg_required_else_help = true)]
struct Cli {
    /// Path to the TOML design config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for output artifacts (created if missing).
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Override the config's RNG seed (used by `optimize`).
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Override the sweep point count.
    #[arg(long, global = true, value_name = "INT")]
    points: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize coupled-section impedances and write the design file.
    Synth,
    /// Sweep S-parameters and write Touchstone and CSV traces.
    Sweep {
        /// Which topology to sweep.
        #[arg(long, value_enum, default_value_t = Which::Traditional)]
        which: Which,
    },
    /// Search stub placements that suppress the harmonic passbands.
    Optimize,
    /// Sweep both topologies and report per-band metric deltas.
    Compare,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config <PATH> is required".to_string()))?;
    let cfg = ConfigFile::load(path)?;
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| {
        CliError::Runtime(format!(
            "cannot create out-dir {}: {e}",
            cli.out_dir.display()
        ))
    })?;
    match cli.command {
        Command::Synth => commands::cmd_synth(&cfg, &cli.out_dir),
        Command::Sweep { which } => commands::cmd_sweep(&cfg, which, &cli.out_dir, cli.points),
        Command::Optimize => commands::cmd_optimize(&cfg, &cli.out_dir, cli.seed, cli.points),
        Command::Compare => commands::cmd_compare(&cfg, &cli.out_dir, cli.points),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
