use std::process::ExitCode;

use clap::Parser;
use cutcell::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cutcell: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
