use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cmloops_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if outcome.written_to.is_none() {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(outcome.rendered.as_bytes()).is_err() {
                    return ExitCode::from(cmloops_cli::EXIT_INVALID as u8);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
