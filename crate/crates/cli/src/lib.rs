//! Command-line front end for the spectral clustering toolkit.
//!
//! Every command reads a graph (`.tsv` edge list or `.csv` matrix), runs one
//! operation, and writes a JSON or CSV report. Floats are written with 17
//! significant digits and every file is written atomically, so identical
//! inputs and seeds give byte-identical outputs.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;

pub use args::Cli;
pub use commands::{execute, run};
pub use error::CliError;
pub use io::parse_graph_file;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "SPECTRAL_ABSTRACTION_THREADS";

/// Configure the global thread pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}
