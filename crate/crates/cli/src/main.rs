use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use imani::error::{EXIT_OK, EXIT_USAGE};
use imani::{Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let result = RunConfig::from_cli(cli).and_then(|cfg| imani::run(&cfg, &mut lock));
    let _ = lock.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::CheckFailed { .. }) {
                eprintln!("imani: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
