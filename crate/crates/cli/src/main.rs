//! `curvspp` command-line front end.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Solver(_) => 3,
            _ => 1,
        }
    }
}

impl From<curvspp::Error> for Failure {
    fn from(e: curvspp::Error) -> Self {
        use curvspp::Error::*;
        match e {
            InvalidMaterial(_) | InvalidGeometry(_) | InvalidArgument(_) | TableParse { .. } => {
                Failure::Validation(e.to_string())
            }
            SingularPivot { .. } | Unphysical(_) => Failure::Solver(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Materials(a) => commands::materials(&a),
        Command::Dispersion(a) => commands::dispersion(&a),
        Command::Green(a) => commands::green(&a),
        Command::Scan(a) => commands::scan(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
