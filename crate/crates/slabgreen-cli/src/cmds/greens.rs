//! `greens`: the axial Green's function on a (z, zp, t) lattice.

use serde::Serialize;
use slabgreen::kernel::green_z;

use crate::args::{GreensArgs, OutputFormat};
use crate::cmds::{linspace, parse_time_ratios};
use crate::conf::{self, CliError};
use crate::output;

#[derive(Serialize)]
struct Row {
    z: f64,
    zp: f64,
    t: f64,
    #[serde(rename = "G1")]
    g1: f64,
    terms_used: usize,
    remainder_bound: f64,
}

pub fn run(args: GreensArgs) -> Result<(), CliError> {
    let resolved = conf::resolve(&args.common)?;
    let slab = resolved.slab()?;
    let zs = match &args.z {
        Some(list) => conf::parse_f64_list(list, "--z")?,
        None => linspace(0.0, resolved.thickness, args.nz),
    };
    let zps = match &args.zp {
        Some(list) => conf::parse_f64_list(list, "--zp")?,
        None => linspace(0.0, resolved.thickness, args.nzp),
    };
    let ts: Vec<f64> = parse_time_ratios(&args.t_over_tau)?
        .iter()
        .map(|r| r * slab.tau())
        .collect();

    let mut rows = Vec::with_capacity(ts.len() * zs.len() * zps.len());
    for &t in &ts {
        for &z in &zs {
            for &zp in &zps {
                let series = green_z(z, zp, t, &slab, &resolved.policy)?;
                rows.push(Row {
                    z,
                    zp,
                    t,
                    g1: series.value,
                    terms_used: series.terms_used,
                    remainder_bound: series.remainder_bound,
                });
            }
        }
    }

    let text = match resolved.format {
        OutputFormat::Csv => {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.z, r.zp, r.t, r.g1, r.terms_used, r.remainder_bound
                    )
                })
                .collect();
            output::csv_table("z,zp,t,G1,terms_used,remainder_bound", &lines)
        }
        OutputFormat::Json => output::json_table(&rows)?,
    };
    output::write_atomic(&args.out, &text)
}
