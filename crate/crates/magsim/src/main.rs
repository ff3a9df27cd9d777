//! Thin CLI over the library runner: parse arguments, load the config, run
//! one command, and report machine-readable error categories on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use magsim::config::load_config;
use magsim::runner::{execute, Command};

#[derive(Parser)]
#[command(
    name = "magsim",
    version,
    about = "Postselected-amplification atomic magnetometer simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Parse and validate the config, then exit without running.
    #[arg(long)]
    validate: bool,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Postselected Fisher information versus rotation angle.
    Fig2a(RunArgs),
    /// Amplified angle versus true angle.
    Fig2b(RunArgs),
    /// Time-dependent rotation signals from the spin dynamics.
    Fig3(RunArgs),
    /// Analyzer cross-talk error ratio versus polarization ratio.
    Fig6(RunArgs),
    /// Shot-noise signal-to-noise comparison.
    Snr(RunArgs),
    /// Detector saturation Monte Carlo study.
    Saturation(RunArgs),
}

impl CliCommand {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            CliCommand::Fig2a(a) => (Command::Fig2a, a),
            CliCommand::Fig2b(a) => (Command::Fig2b, a),
            CliCommand::Fig3(a) => (Command::Fig3, a),
            CliCommand::Fig6(a) => (Command::Fig6, a),
            CliCommand::Snr(a) => (Command::Snr, a),
            CliCommand::Saturation(a) => (Command::Saturation, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();
    match run(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.category(), e);
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command, args: &RunArgs) -> magsim::Result<()> {
    let config = load_config(&args.config)?;
    if args.validate {
        println!("config ok: {}", args.config.display());
        return Ok(());
    }
    let config_text = std::fs::read_to_string(&args.config).map_err(|source| {
        magsim::Error::Io {
            path: args.config.clone(),
            source,
        }
    })?;
    let out_dir = args.out.clone().unwrap_or_else(|| config.output.dir.clone());
    let written = execute(command, &config, &config_text, &out_dir, args.seed)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
