use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    match intree_cli::run(intree_cli::args::Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
