use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod config;
mod output;

use args::{Cli, Command};

/// Anything that stops a command, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or config values (exit 2).
    Usage(String),
    /// A computation or suite failed (exit 1).
    Numerical(String),
}

impl Failure {
    fn numerical(err: puo_core::Error) -> Self {
        Failure::Numerical(err.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Numerical(format!("write failed: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = BufWriter::new(io::stdout().lock());
    let result = match &cli.command {
        Command::Report(a) => commands::report(a, out),
        Command::Evolve(a) => commands::evolve(a, out),
        Command::Scan(a) => commands::scan(a, out),
        Command::Validate(a) => commands::validate(a, out).and_then(|passed| {
            if passed {
                Ok(())
            } else {
                Err(Failure::Numerical("validation failed".into()))
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Numerical(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
