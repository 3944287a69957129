//! Command-line front end for `doubling-spectrum`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod parse;
pub mod validate;

pub use cli::{Cli, Command, DEFAULT_SEED};
pub use error::{CliError, CliResult};
pub use output::{Format, Report, SCHEMA};
pub use parse::parse_c;

use output::{destination, write_atomic};
use std::io::Write;

/// Executes a parsed command line and returns the exit status.
///
/// Diagnostics go to standard error.
pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    match run_inner(cli) {
        Ok(0) => 0,
        Ok(failures) => {
            eprintln!("doubling {}: {failures} check(s) failed", cli.command.name());
            1
        }
        Err(e) => {
            eprintln!("doubling {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn run_inner(cli: &Cli) -> CliResult<usize> {
    let report = commands::execute(cli)?;
    let text = report.render(cli.format)?;
    match destination(cli.output.as_deref(), report.command, cli.format) {
        Some(path) => write_atomic(&path, &text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(report.failures)
}
