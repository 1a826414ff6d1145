//! Command line front end: simulate, envelope, classify, steady, sweep.
//!
//! Exit status: `classify` returns 0/1/2 for persists/extinct/inconclusive;
//! every command returns 3 on error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rd_interval::classifier::Outcome;

mod commands;
mod config;
mod error;
mod output;

use config::Config;

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "rd-interval", version, about = "Reaction-diffusion on moving intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver; writes trajectory.csv, observables.csv, manifest.json.
    Simulate(Common),
    /// Evaluate the sub/supersolution envelopes; writes bounds.csv.
    Envelope(Common),
    /// Classify persistence/extinction; writes report.txt. Exit 0/1/2.
    Classify(Common),
    /// Steady states over a list of lengths; writes steady.csv.
    Steady(Common),
    /// Classify (and simulate) over a parameter grid; writes summary.csv.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Accepted for interface compatibility; nothing is random.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(command: Command) -> error::Result<u8> {
    let (Command::Simulate(c) | Command::Envelope(c) | Command::Classify(c) | Command::Steady(c) | Command::Sweep(c)) =
        &command;
    if let Some(n) = c.jobs {
        rd_interval::exec::configure_threads(n)?;
    }
    let cfg = Config::load(&c.config)?;
    let base = c.config.parent().unwrap_or(Path::new("."));
    let out = c.out.as_path();
    std::fs::create_dir_all(out).map_err(|e| error::CliError::io(out, e))?;
    match &command {
        Command::Simulate(_) => commands::simulate(&cfg, base, out)?,
        Command::Envelope(_) => commands::envelope(&cfg, base, out)?,
        Command::Classify(_) => {
            return Ok(match commands::classify(&cfg, base, out)? {
                Outcome::Persists => 0,
                Outcome::Extinct => 1,
                Outcome::Inconclusive => 2,
            })
        }
        Command::Steady(_) => commands::steady(&cfg, out)?,
        Command::Sweep(_) => commands::sweep(&cfg, base, out)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
