use std::process::ExitCode;

use clap::Parser;
use fourbody::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
