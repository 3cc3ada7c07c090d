use std::process::ExitCode;

use clap::Parser;
use pqmkz_cli::{run, write_outcome, Cli, RunConfig};

fn main() -> ExitCode {
    match try_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("pqmkz: one or more checks failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("pqmkz: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main() -> anyhow::Result<bool> {
    let config = RunConfig::from_cli(Cli::parse())?;
    let outcome = run(&config)?;
    write_outcome(&config, &outcome)?;
    Ok(outcome.success)
}
