//! `profile`: temperature history of the initially uniform layer.

use serde::Serialize;
use slabgreen::temp::temp;

use crate::args::{OutputFormat, ProfileArgs};
use crate::cmds::{linspace, parse_time_ratios};
use crate::conf::{self, CliError};
use crate::output::{self, Chart};

#[derive(Serialize)]
struct Row {
    z: f64,
    t: f64,
    #[serde(rename = "T_over_T0")]
    temperature: f64,
}

pub fn run(args: ProfileArgs) -> Result<(), CliError> {
    let resolved = conf::resolve(&args.common)?;
    let slab = resolved.slab()?;
    let zs = match &args.z {
        Some(list) => conf::parse_f64_list(list, "--z")?,
        None => linspace(0.0, resolved.thickness, args.nz),
    };
    let ratios = parse_time_ratios(&args.t_over_tau)?;

    let mut rows = Vec::with_capacity(zs.len() * ratios.len());
    for &z in &zs {
        for &ratio in &ratios {
            let t = ratio * slab.tau();
            rows.push(Row {
                z,
                t,
                temperature: temp(z, t, &slab)?,
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
    output::write_atomic(&args.out, &text)?;

    if args.svg {
        let curves = ratios
            .iter()
            .map(|&ratio| {
                let points = rows
                    .iter()
                    .filter(|r| r.t == ratio * slab.tau())
                    .map(|r| (r.z, r.temperature))
                    .collect();
                (format!("t/tau = {ratio}"), points)
            })
            .collect();
        let chart = Chart {
            title: "Layer temperature history",
            x_label: "z",
            y_label: "T / T0",
            curves,
        };
        output::write_atomic(&args.out.with_extension("svg"), &output::render_chart(&chart))?;
    }
    Ok(())
}
