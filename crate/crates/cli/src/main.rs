use std::process::ExitCode;

use clap::Parser;
use setbm_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("setbm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
