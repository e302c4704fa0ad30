//! `arbometric`: invariant measures of diffusions on metric graphs.
//!
//! Subcommands: `validate`, `invariant`, `compare`, `ring-scaling`,
//! `mctt`. Log verbosity is controlled through the `RUST_LOG` environment
//! variable (`error`, `info`, `debug`, ...).

mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand};
use commands::{CommandError, Format, Method};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "arbometric",
    version,
    about = "Invariant measures of diffusions on metric graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model configuration.
    Validate { config: String },
    /// Compute the invariant measure and write a density report.
    Invariant {
        config: String,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        out: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run every applicable method and report pairwise agreement.
    Compare { config: String },
    /// Convergence table of the discrete ring walk toward the continuum.
    RingScaling {
        config: String,
        #[arg(long = "N", value_delimiter = ',', default_value = "100,200,400,800")]
        meshes: Vec<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Stationary distribution of a finite chain, tree-theorem vs linear.
    Mctt { chain: String },
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let json_errors = matches!(
        cli.command,
        Command::Invariant {
            format: Format::Json,
            ..
        } | Command::Compare { .. }
            | Command::Mctt { .. }
    );
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            if json_errors {
                let obj = ErrorObject {
                    error: ErrorBody {
                        kind: err.kind(),
                        message: err.to_string(),
                    },
                };
                eprintln!("{}", serde_json::to_string(&obj).expect("error serializes"));
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CommandError> {
    match command {
        Command::Validate { config } => {
            println!("{}", commands::cmd_validate(&config)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariant {
            config,
            method,
            out,
            format,
        } => {
            println!(
                "{}",
                commands::cmd_invariant(&config, method, &out, format)?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { config } => {
            let (report, ok) = commands::cmd_compare(&config)?;
            println!("{report}");
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(CommandError::ComparisonFailed)
            }
        }
        Command::RingScaling {
            config,
            meshes,
            out,
        } => {
            let csv = commands::cmd_ring_scaling(&config, &meshes)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv)
                        .map_err(|source| CommandError::Write { path, source })?;
                }
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mctt { chain } => {
            println!("{}", commands::cmd_mctt(&chain)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
