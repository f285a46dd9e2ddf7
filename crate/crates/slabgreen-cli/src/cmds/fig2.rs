//! `fig2`: half-layer temperature profiles for a family of Biot numbers,
//! one data file per wall strength. The field is evaluated on the full
//! mirrored lattice first so its bounds and midplane symmetry are verified
//! before anything is written; only the half-layer is emitted.

use std::path::PathBuf;

use serde::Serialize;
use slabgreen::temp::TemperatureField;

use crate::args::{Fig2Args, OutputFormat};
use crate::cmds::linspace;
use crate::conf::{self, CliError};
use crate::output::{self, Chart};

const DEFAULT_BIOTS: &str = "inf,100,10,1,0.1";

#[derive(Serialize)]
struct Row {
    z: f64,
    t: f64,
    #[serde(rename = "T_over_T0")]
    temperature: f64,
}

pub fn run(args: Fig2Args) -> Result<(), CliError> {
    if args.nz < 2 || args.nt < 1 {
        return Err(CliError::Usage("fig2 needs --nz >= 2 and --nt >= 1".into()));
    }
    if !(args.t_max_over_tau > 0.0) {
        return Err(CliError::Usage("--t-max-over-tau must be positive".into()));
    }
    let resolved = conf::resolve(&args.common)?;
    let sweep = resolved.wall_list(DEFAULT_BIOTS)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;

    let thickness = resolved.thickness;
    let half = linspace(0.0, 0.5 * thickness, args.nz);
    // Mirror every node except the exact midplane so the field checks can
    // pair the two halves.
    let mut lattice = half.clone();
    for &z in half.iter().rev() {
        let mirrored = thickness - z;
        if (mirrored - z).abs() > 1e-12 * thickness {
            lattice.push(mirrored);
        }
    }

    for (token, wall) in sweep {
        let slab = resolved.slab_for(wall)?;
        let t_max = args.t_max_over_tau * slab.tau();
        let t_nodes: Vec<f64> = (0..args.nt)
            .map(|j| (j + 1) as f64 * t_max / args.nt as f64)
            .collect();
        let field = TemperatureField::compute(&slab, &lattice, &t_nodes)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        field
            .check_bounds()
            .map_err(|e| CliError::Numerical(format!("Bi = {token}: {e}")))?;

        let mut rows = Vec::with_capacity(args.nz * args.nt);
        for (i, &z) in half.iter().enumerate() {
            for (j, &t) in t_nodes.iter().enumerate() {
                rows.push(Row {
                    z,
                    t,
                    temperature: field.values[j][i],
                });
            }
        }
        let text = match resolved.format {
            OutputFormat::Csv => {
                let lines: Vec<String> = rows
                    .iter()
                    .map(|r| format!("{},{},{}", r.z, r.t, r.temperature))
                    .collect();
                output::csv_table("z,t,T_over_T0", &lines)
            }
            OutputFormat::Json => output::json_table(&rows)?,
        };
        let ext = match resolved.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        let path: PathBuf = args.out_dir.join(format!("fig2_bi_{token}.{ext}"));
        output::write_atomic(&path, &text)?;

        if args.svg {
            // A readable subset of time slices, early to late.
            let step = (args.nt / 6).max(1);
            let curves = (0..args.nt)
                .filter(|j| (j + 1) % step == 0)
                .map(|j| {
                    let points = half.iter().enumerate().map(|(i, &z)| (z, field.values[j][i])).collect();
                    (format!("t/tau = {}", t_nodes[j] / slab.tau()), points)
                })
                .collect();
            let chart = Chart {
                title: "Half-layer temperature profiles",
                x_label: "z",
                y_label: "T / T0",
                curves,
            };
            output::write_atomic(&path.with_extension("svg"), &output::render_chart(&chart))?;
        }
    }
    Ok(())
}
