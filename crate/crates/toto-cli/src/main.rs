use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = toto_cli::args::Cli::parse();
    match toto_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
