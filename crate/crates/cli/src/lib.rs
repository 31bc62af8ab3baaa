//! Front end for the `schatten` binary: file formats, experiment runners and
//! result emission.

pub mod cli;
pub mod commands;
pub mod error;
pub mod experiments;
pub mod io;

use cli::{Cli, Command};
use error::{CliError, CliResult};

fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Fig2(a) => commands::run_fig2(a),
        Command::Similarity(a) => commands::run_similarity(a),
        Command::Learn(a) => commands::learn(a),
        Command::Decide(a) => commands::decide(a),
    }
}

/// Runs a parsed command, on a pool of `--threads` workers when given.
pub fn run(cli: &Cli) -> CliResult<()> {
    let threads = cli.command.common().threads;
    match threads {
        Some(0) => Err(CliError::Domain("--threads must be >= 1".into())),
        #[cfg(feature = "parallel")]
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command)),
        _ => dispatch(&cli.command),
    }
}
