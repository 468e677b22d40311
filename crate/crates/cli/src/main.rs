use std::process::ExitCode;

use clap::Parser;
use diamond_cli::args::Args;
use diamond_cli::{run, write_output, CliError};

fn main() -> ExitCode {
    let result = Args::parse().into_config().and_then(|cfg| {
        let output = run(&cfg)?;
        write_output(&cfg, &output)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
