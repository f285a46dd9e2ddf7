//! Command-line surface for the slab heat-conduction library: evaluate
//! kernels and temperature histories, dump eigenvalue tables, reproduce the
//! half-layer profile figure data, self-validate, and compare the cost of
//! the image-series and spectral evaluation paths.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
//! or I/O error. Diagnostics go to stderr as a single line.

mod args;
mod cmds;
mod conf;
mod output;

use clap::Parser;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return 0;
            }
            let rendered = err.render().to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("usage error");
            eprintln!("{line}");
            return 2;
        }
    };
    match cmds::dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
