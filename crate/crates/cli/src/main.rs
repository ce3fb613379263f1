use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circwave_cli::recipes::{self, RECIPES};
use circwave_cli::{emit_csv, parse_config, resolve_threads, run_with_threads, CliError, EmitOptions, THREADS_ENV};
use clap::{Parser, Subcommand};

/// Genuine multimode entanglement sweeps for circular waveguide arrays.
#[derive(Debug, Parser)]
#[command(name = "circwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the sweep described by a JSON config and write CSV.
    Run {
        config: PathBuf,
        /// Output file; overrides `output` in the config. Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads; overrides CIRCWAVE_THREADS and `threads`.
        #[arg(long)]
        threads: Option<usize>,
        /// Omit the generation-time metadata line.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List the shipped figure recipes.
    Recipes {
        /// Print one recipe's config.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
        /// Write every recipe into DIR as <name>.json.
        #[arg(long, value_name = "DIR", conflicts_with = "show")]
        write: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, output, threads, no_timestamp } => {
            let parsed = parse_config(&read(&config)?)?;
            let env = std::env::var(THREADS_ENV).ok();
            let threads = resolve_threads(threads, env.as_deref(), parsed.threads)?;
            let result = run_with_threads(&parsed, threads)?;
            let target = output.or_else(|| parsed.output.as_ref().map(PathBuf::from));
            emit_csv(&result, target.as_deref(), EmitOptions { no_timestamp })
        }
        Command::Validate { config } => {
            let parsed = parse_config(&read(&config)?)?;
            parsed.validate()?;
            println!("{}: ok ({})", config.display(), parsed.experiment.name());
            Ok(())
        }
        Command::Recipes { show: Some(name), .. } => {
            let recipe = recipes::find(&name).ok_or_else(|| CliError::Validation {
                field: "show".into(),
                message: format!("no recipe named {name:?}"),
            })?;
            print!("{}", recipe.config);
            Ok(())
        }
        Command::Recipes { write: Some(dir), .. } => {
            for path in recipes::write_all(&dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Recipes { .. } => {
            for r in RECIPES {
                println!("{:<14} {}", r.name, r.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
