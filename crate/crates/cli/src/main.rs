use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oscdamp_cli::{run_evolve, run_steady_sweep, validate, Engine, RunConfig, RunError, Table};

/// Two coupled oscillators under local or normal-mode damping.
#[derive(Parser)]
#[command(name = "oscdamp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured initial state and write the outputs over time.
    Evolve {
        #[command(flatten)]
        io: Io,
        /// Integrate the truncated Fock-space master equation instead.
        #[arg(long, hide = true)]
        oracle: bool,
    },
    /// Stationary negativities and one-mode fidelity over `nbar_grid`.
    SteadySweep {
        #[command(flatten)]
        io: Io,
    },
    /// Check a configuration without running it.
    Validate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn write(table: &Table, out: Option<&PathBuf>) -> Result<(), RunError> {
    let csv = table.to_csv();
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|source| RunError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Evolve { io, oracle } => {
            let cfg = RunConfig::from_path(&io.config)?;
            let engine = if oracle { Engine::Oracle } else { Engine::Gaussian };
            write(&run_evolve(&cfg, engine)?, io.out.as_ref())
        }
        Command::SteadySweep { io } => {
            let cfg = RunConfig::from_path(&io.config)?;
            write(&run_steady_sweep(&cfg)?, io.out.as_ref())
        }
        Command::Validate { config } => {
            validate(&RunConfig::from_path(&config)?)?;
            eprintln!("{}: ok", config.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
