use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use spectral_abstraction_cli::{configure_threads, run, Cli, CliError};

fn fail(e: &CliError, code: u8) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim_end().to_string()), 2),
    };
    if let Err(e) = configure_threads() {
        return fail(&e, 2);
    }
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e, 1),
    }
}
