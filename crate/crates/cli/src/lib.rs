//! Command-line front end for the `tcover` library.

mod args;
mod commands;
pub mod report;

pub use args::*;
pub use commands::{dispatch, Output, P_BORDER};

use anyhow::Result;

/// Run a parsed command on a pool of `cli.threads` workers.
pub fn run(cli: &Cli) -> Result<Output> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build()?;
    pool.install(|| dispatch(cli))
}
