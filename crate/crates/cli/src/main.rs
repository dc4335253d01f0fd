use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qmeter_cli::error::{EXIT_OK, EXIT_USAGE};
use qmeter_cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match qmeter_cli::run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("qmeter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
