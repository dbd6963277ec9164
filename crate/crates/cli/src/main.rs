//! `coordlab` command-line front end.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 enumeration
//! budget exceeded, 4 verification violation, 5 no pure equilibrium.

mod args;
mod commands;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command, Output};
use commands::Outcome;

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<coordlab::Error>() {
        Some(coordlab::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(coordlab::Error::PotentialViolation { .. }) => commands::EXIT_VIOLATION as u8,
        Some(coordlab::Error::NoEquilibrium) => commands::EXIT_NO_EQUILIBRIUM as u8,
        Some(
            coordlab::Error::Parse { .. }
            | coordlab::Error::InvalidInstance(_)
            | coordlab::Error::InvalidProfile(_)
            | coordlab::Error::InvalidParameter(_)
            | coordlab::Error::ObjectiveMismatch { .. }
            | coordlab::Error::Io(_),
        ) => EXIT_USAGE,
        _ => 1,
    }
}

/// Caps rayon's global pool at `COORDLAB_THREADS` workers.
fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var("COORDLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        coordlab::Error::InvalidParameter(format!(
            "COORDLAB_THREADS must be a positive integer, got `{text}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the worker pool")?;
    Ok(())
}

fn emit(output: &Output, outcome: &Outcome) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, &outcome.body)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", outcome.body),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    let (outcome, output) = match &cli.command {
        Command::Eval(a) => (commands::eval(a)?, &a.output),
        Command::Dynamics(a) => (commands::dynamics(a)?, &a.output),
        Command::Poa(a) => (commands::poa(a)?, &a.output),
        Command::Verify(a) => (commands::verify(a)?, &a.output),
        Command::Gen(a) => (commands::gen(a)?, &a.output),
    };
    emit(output, &outcome)?;
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    Ok(outcome.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
