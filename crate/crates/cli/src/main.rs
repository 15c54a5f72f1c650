use std::process::ExitCode;

use clap::Parser;
use distortion_lab::args::Cli;
use distortion_lab::{configure_threads, run};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("distortion-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
