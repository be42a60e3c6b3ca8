use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod presets;
mod table;

use commands::Output;
use config::RunConfig;
use error::{CliError, CliResult};

/// Response, mode structure, stability and lasing threshold of a multimode
/// optomechanical cavity, written as CSV.
#[derive(Parser)]
#[command(name = "optomech", version)]
struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the random system drawn by `oracle` without a config
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the number of grid points
    #[arg(long, global = true)]
    points: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Response function on a frequency grid
    Sweep,
    /// Poles of the response function
    Roots,
    /// Poles with residues and bright/dark classification
    Residues,
    /// Two-mode roots versus splitting
    Bifurcation,
    /// Drift-matrix eigenvalues
    Stability,
    /// Phonon-lasing threshold power
    Threshold,
    /// Time-domain integration checked against the response function
    Oracle,
    /// Data behind a reference figure (fig2, fig3, fig4, bifurcation)
    Preset { name: String },
}

fn require_config(cli: &Cli) -> CliResult<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::config("MissingConfig", "--config is required"))?;
    RunConfig::load(path)
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Sweep => commands::sweep_cmd(&require_config(cli)?, cli.points),
        Command::Roots => commands::roots_cmd(&require_config(cli)?),
        Command::Residues => commands::residues_cmd(&require_config(cli)?),
        Command::Bifurcation => commands::bifurcation_cmd(&require_config(cli)?, cli.points),
        Command::Stability => commands::stability_cmd(&require_config(cli)?),
        Command::Threshold => commands::threshold_cmd(&require_config(cli)?),
        Command::Oracle => {
            let cfg = cli.config.as_ref().map(|p| RunConfig::load(p)).transpose()?;
            commands::oracle_cmd(cfg.as_ref(), cli.seed.unwrap_or(0))
        }
        Command::Preset { name } => Ok(presets::preset_table(name, cli.points)?.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", CliError::config("Usage", first));
            return ExitCode::from(2);
        }
    };
    let result = run(&cli).and_then(|out| {
        out.table.write(cli.out.as_deref())?;
        for note in &out.notes {
            eprintln!("{note}");
        }
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code)
        }
    }
}
