use std::process::ExitCode;

use clap::Parser;
use pyrohv_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(at) = e.field_path() {
                eprintln!("  at: {at}");
            }
            ExitCode::FAILURE
        }
    }
}
