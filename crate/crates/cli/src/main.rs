use std::process::ExitCode;

use clap::Parser;
use plu_cli::{print_usage_error, run_cli, CliArgs};

fn main() -> ExitCode {
    let args = match CliArgs::try_parse() {
        Ok(args) => args,
        // --help and --version
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            print_usage_error(&e);
            return ExitCode::from(2);
        }
    };
    ExitCode::from(run_cli(&args) as u8)
}
