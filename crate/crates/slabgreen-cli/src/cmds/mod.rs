//! Subcommand implementations.

mod bench;
mod fig2;
mod greens;
mod profile;
mod roots;
mod validate;

use crate::args::{Cli, Command};
use crate::conf::CliError;

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Greens(args) => greens::run(args),
        Command::Profile(args) => profile::run(args),
        Command::Fig2(args) => fig2::run(args),
        Command::Roots(args) => roots::run(args),
        Command::Validate(args) => validate::run(args),
        Command::Bench(args) => bench::run(args),
    }
}

/// Evenly spaced lattice including both endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Positive, strictly increasing t/tau list for time sweeps.
pub fn parse_time_ratios(text: &str) -> Result<Vec<f64>, CliError> {
    let ratios = crate::conf::parse_f64_list(text, "--t-over-tau")?;
    for &r in &ratios {
        if !(r > 0.0) {
            return Err(CliError::Usage(format!(
                "--t-over-tau values must be positive, got {r}"
            )));
        }
    }
    Ok(ratios)
}
