//! `spinlab` — command-line front end for the collective-spin toolkit.
//!
//! Every command writes a single JSON object (or a CSV table for `scan`) to
//! standard output and keeps diagnostics on standard error. Exit codes: 0 on
//! success, 2 on domain or usage errors, 3 on numerical failures. Stochastic
//! commands echo their seed so any run can be reproduced byte for byte.

mod axes;
mod commands;
mod error;
mod record;
mod spec;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = commands::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
