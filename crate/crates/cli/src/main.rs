use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qherm::cli::Cli::parse();
    ExitCode::from(qherm::run(&cli))
}
