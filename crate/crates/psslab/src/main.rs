//! `psslab` binary: solve the periodic Cauchy problem, evaluate the surface
//! geometry its solutions carry, compute second-fundamental-form branches and
//! run the verification suite.

use clap::{Args, Parser, Subcommand};
use psslab::cli;
use psslab::config::{parse_config, Command as RunCommand, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "psslab", version, about = "Periodic pseudospectral solver and pseudospherical-surface verification lab")]
struct CliArgs {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Configuration file (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized property checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplicative tolerance scale for verification checks.
    #[arg(long = "tol-scale")]
    tol_scale: Option<f64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Integrate the Cauchy problem and export the trajectory with monitors.
    Simulate(Common),
    /// Evaluate the one-form geometry of a run over all requested branches.
    Geometry(Common),
    /// Compute second-fundamental-form coefficients and their residuals.
    Connection(Common),
    /// Run the full identity/property suite; nonzero exit on any failure.
    Verify(Common),
}

fn load_config(common: &Common, command: RunCommand) -> Result<RunConfig, String> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| e.to_string())?
        }
        None => RunConfig::default(),
    };
    config.command = command;
    if let Some(out) = &common.out {
        config.out_dir = out.display().to_string();
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(scale) = common.tol_scale {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(format!("--tol-scale must be positive and finite, got {scale}"));
        }
        config.tol_scale = scale;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let (common, command) = match &args.command {
        Sub::Simulate(c) => (c, RunCommand::Simulate),
        Sub::Geometry(c) => (c, RunCommand::Geometry),
        Sub::Connection(c) => (c, RunCommand::Connection),
        Sub::Verify(c) => (c, RunCommand::Verify),
    };
    let config = match load_config(common, command) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("{message}");
            return ExitCode::from(2);
        }
    };
    match cli::run_command(&config) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(err) => {
            eprintln!("psslab {command}: {err}");
            ExitCode::from(1)
        }
    }
}
