use std::process::ExitCode;

use aggression_cli::commands::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    run(Cli::parse())
}
