use std::io;
use std::process::ExitCode;

use clap::Parser;
use kalah::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdin = io::stdin().lock();
    let stdout = io::stdout().lock();
    match run(cli, stdin, stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kalah: {e}");
            ExitCode::FAILURE
        }
    }
}
