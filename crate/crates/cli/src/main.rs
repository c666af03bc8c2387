//! `weakvel` — config-driven runner for weak-velocity experiments.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use weakvel_cli::error::CliError;
use weakvel_cli::{config, runner};

#[derive(Parser)]
#[command(
    name = "weakvel",
    version,
    about = "Weak-velocity and one-way-speed experiments from declarative TOML configs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its JSON report.
    Run { config: PathBuf },
    /// Run a parameter scan and write its CSV table.
    Scan { config: PathBuf },
    /// Parse and validate a config without writing outputs.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => execute(config, Mode::Run),
        Command::Scan { config } => execute(config, Mode::Scan),
        Command::Validate { config } => execute(config, Mode::Validate),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

enum Mode {
    Run,
    Scan,
    Validate,
}

fn execute(config_path: &Path, mode: Mode) -> Result<(), CliError> {
    let cfg = config::load(config_path)?;
    let base = config_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    match mode {
        Mode::Validate => {
            runner::validate(&cfg, &base)?;
            println!("config valid: {} experiment", cfg.experiment.as_str());
        }
        Mode::Run => {
            let outcome = runner::run(&cfg, &base)?;
            for line in outcome.summary {
                println!("{line}");
            }
        }
        Mode::Scan => {
            let outcome = runner::scan(&cfg, &base)?;
            for line in outcome.summary {
                println!("{line}");
            }
        }
    }
    Ok(())
}
