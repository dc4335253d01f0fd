//! Command-line front end: reads JSON documents of named states, measurements,
//! instruments and channels, and runs computations, classification and
//! property checks from `qmeter-core`.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage error, 3 invalid
//! document.

pub mod args;
pub mod commands;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod output;

pub use args::Cli;
pub use commands::Outcome;
pub use document::{Document, Library};
pub use error::CliError;

use args::Command;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Classify(a) => commands::classify(a),
        Command::Verify(a) => commands::verify(a),
        Command::Fixtures { dir } => commands::write_fixtures(dir),
    }
}
