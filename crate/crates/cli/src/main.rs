use std::process::ExitCode;

use clap::Parser;
use stepshare_cli::{index, run, Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(cfg) => run(cfg),
        Command::Index(cfg) => index::run_index(cfg).map(|r| {
            eprintln!("{} vertices written ({} queries, {} rounds)", r.vertices, r.queries, r.rounds);
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
