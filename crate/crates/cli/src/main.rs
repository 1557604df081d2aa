mod artifact;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Command, Flags, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "imbq", version, about = "Evolutions, norm sweeps, bound checks and growth fits for the linear IMBq equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Evolve (0, u₁) on a periodic grid; writes norms and energy per time.
    Evolve(Flags),
    /// Tabulate ‖w(t,·)‖²_ξ from the quadrature oracle.
    Norms(Flags),
    /// Run the bound chains; exits 1 if any check fails.
    Bounds(Flags),
    /// Fit growth regimes to a norm series; writes a JSON report.
    Fit(Flags),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, flags) = match cli.command {
        Sub::Evolve(f) => (Command::Evolve, f),
        Sub::Norms(f) => (Command::Norms, f),
        Sub::Bounds(f) => (Command::Bounds, f),
        Sub::Fit(f) => (Command::Fit, f),
    };
    let cfg = RunConfig::resolve(command, &flags)?;
    log::info!("{cfg:?}");
    let outcome = match command {
        Command::Evolve => commands::evolve(&cfg)?,
        Command::Norms => commands::norms(&cfg)?,
        Command::Bounds => commands::bounds(&cfg)?,
        Command::Fit => commands::fit(&cfg)?,
    };
    artifact::emit(&outcome.bytes, cfg.out.as_deref())?;
    if outcome.failed > 0 {
        return Err(CliError::ChecksFailed {
            failed: outcome.failed,
            total: outcome.total,
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("imbq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
