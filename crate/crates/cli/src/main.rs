//! `lipschitz`: generate Appell data, evaluate delta functions and run the
//! verification suites.
//!
//! Exit codes: 0 when every check passes, 1 when an identity fails its
//! tolerance, 2 on configuration or input errors.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{appell, eval, formal_group, verify};
use config::ConfigError;

#[derive(Parser, Debug)]
#[command(name = "lipschitz", version, about = "Appell sequences, delta functions and Lipschitz summation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomials, φ vector, parity and R table for a descriptor.
    Appell(appell::AppellArgs),
    /// Tabulate δ_n, Δ_n or φ over points or a grid.
    Eval(eval::EvalArgs),
    /// Run a verification suite and report every defect.
    Verify(verify::VerifyArgs),
    /// Universal formal group coefficients and Bernoulli numbers.
    FormalGroup(formal_group::FormalGroupArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Appell(a) => appell::run(a).map(|()| true),
        Command::Eval(a) => eval::run(a).map(|()| true),
        Command::Verify(a) => verify::run(a),
        Command::FormalGroup(a) => formal_group::run(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match e.downcast_ref::<ConfigError>() {
                Some(c) => eprintln!("lipschitz: configuration error: {c}"),
                None => eprintln!("lipschitz: error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
