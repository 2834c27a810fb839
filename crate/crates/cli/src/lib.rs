//! Command implementations behind the `epochlab` binary.
//!
//! Every subcommand is a plain function from parsed arguments to the text
//! it prints, so integration tests can call the logic without spawning a
//! process. The binary in `main.rs` only parses arguments, dispatches, and
//! maps errors to exit codes: 1 for invocation mistakes, 2 for runtime
//! failures.

pub mod args;
pub mod chart;
pub mod commands;
pub mod error;

pub use args::{Cli, Command};
pub use error::CliError;

/// Runs one parsed subcommand and returns the text to print on stdout.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Schedule(args) => commands::cmd_schedule(args),
        Command::Ilri(args) => commands::cmd_ilri(args),
        Command::Dataset(command) => commands::cmd_dataset(command),
        Command::Experiment(args) => commands::cmd_experiment(args),
        Command::Analyze(args) => commands::cmd_analyze(args),
    }
}
