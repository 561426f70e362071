//! Command-line experiment runner: argument parsing, result files and plots.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use clap::CommandFactory;

pub use args::CliArgs;
pub use error::{CliError, Result};

/// Prints a usage error the way clap does, always followed by the usage line.
pub fn print_usage_error(err: &clap::Error) {
    let rendered = err.render().to_string();
    eprint!("{rendered}");
    if !rendered.contains("Usage:") {
        eprintln!("\n{}", CliArgs::command().render_usage());
    }
}

/// Executes parsed arguments and maps the outcome to a process exit code
/// (0 success, 1 runtime or I/O failure, 2 usage error).
pub fn run_cli(args: &CliArgs) -> i32 {
    match commands::execute(args) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let err = CliArgs::command().error(clap::error::ErrorKind::ValueValidation, msg);
            print_usage_error(&err);
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
