//! `roots`: the eigenvalue table of the wall condition, one row per mode.

use serde::Serialize;
use slabgreen::eigen::{dirichlet_basis, find_roots, EigenBasis};
use slabgreen::RobinCondition;

use crate::args::{OutputFormat, RootsArgs};
use crate::conf::{self, CliError};
use crate::output;

#[derive(Serialize)]
struct Row {
    index: usize,
    alpha: f64,
    norm: f64,
}

pub fn run(args: RootsArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let resolved = conf::resolve(&args.common)?;
    let slab = resolved.slab()?;
    let basis: EigenBasis = match slab.robin {
        RobinCondition::DirichletInfinite => dirichlet_basis(slab.thickness, args.count)?,
        RobinCondition::Finite(lambda) => find_roots(slab.thickness, lambda, args.count)?,
    };

    let rows: Vec<Row> = (0..basis.count())
        .map(|m| Row {
            index: m + 1,
            alpha: basis.alphas[m],
            norm: basis.norms[m],
        })
        .collect();

    let text = match resolved.format {
        OutputFormat::Csv => {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| format!("{},{},{}", r.index, r.alpha, r.norm))
                .collect();
            output::csv_table("index,alpha,norm", &lines)
        }
        OutputFormat::Json => output::json_table(&rows)?,
    };
    output::write_atomic(&args.out, &text)
}
