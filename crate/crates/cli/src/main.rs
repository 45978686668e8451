use std::process::ExitCode;

use clap::Parser;
use panfuse_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("panfuse: {e}");
            ExitCode::from(exit::USAGE)
        }
    }
}
