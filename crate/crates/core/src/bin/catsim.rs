use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catsim::runner::{load_config, run, RunError};

#[derive(Parser)]
#[command(name = "catsim", version, about = "Cat-state decoherence runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write CSV tables and plot scripts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result: Result<(), RunError> = match cli.command {
        Command::Run { config, seed, out } => load_config(&config, seed).and_then(|cfg| {
            for path in run(&cfg, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }),
        Command::Validate { config } => load_config(&config, None).map(|cfg| {
            println!("ok: {} scenario", cfg.scenario.name());
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
