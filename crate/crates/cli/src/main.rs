mod args;
mod commands;
mod matrix_file;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("detsquare: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
