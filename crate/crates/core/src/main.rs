use std::process::ExitCode;

use clap::Parser;
use cyclocond::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
