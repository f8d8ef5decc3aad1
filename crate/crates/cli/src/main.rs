//! `biserial` command-line front end.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, OutputFormat};

/// Failure of a single invocation.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] biserial::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Domain(_) => 1,
            Self::Usage(_) => 2,
        }
    }
}

fn init_threads() {
    let Ok(raw) = std::env::var("BISERIAL_THREADS") else { return };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // Fails only if a pool already exists, which cannot happen this early.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring BISERIAL_THREADS={raw:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_threads();
    let format = cli.global.format;
    match commands::run(&cli) {
        Ok(report) => {
            match format {
                OutputFormat::Text => print!("{}", report.text),
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&report.json).expect("json values serialize"))
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match (&e, format) {
                (CliError::Domain(d), OutputFormat::Json) => println!(
                    "{}",
                    serde_json::json!({ "error": d.name(), "message": d.to_string() })
                ),
                (CliError::Domain(d), OutputFormat::Text) => {
                    let msg = d.to_string();
                    if msg.starts_with(d.name()) {
                        eprintln!("error: {msg}");
                    } else {
                        eprintln!("error [{}]: {msg}", d.name());
                    }
                }
                (CliError::Usage(msg), _) => eprintln!("usage error: {msg}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
