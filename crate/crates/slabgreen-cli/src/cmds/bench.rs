//! `bench`: wall-clock comparison of the image series against the spectral
//! route across a ladder of time ratios. Timings are machine dependent, so
//! this table is informative rather than reproducible; the crossover point
//! printed at the end is the quantity of interest.

use std::time::Instant;

use serde::Serialize;
use slabgreen::eigen::{auto_basis, eigen_green_z, modes_needed};
use slabgreen::kernel::green_z;
use slabgreen::SlabError;

use crate::args::{BenchArgs, OutputFormat};
use crate::cmds::parse_time_ratios;
use crate::conf::{self, CliError};
use crate::output::{csv_table, json_table, write_atomic};

/// Sampling window for the ratio ladder. Below the floor the spectral side
/// refuses anyway and the image side needs only one ring, so nothing new
/// is learned; above the cap both routes are a handful of terms.
const RATIO_FLOOR: f64 = 1e-4;
const RATIO_CAP: f64 = 10.0;

/// Evaluation repeats per timing sample, to lift cheap calls above the
/// clock resolution.
const REPEATS: u32 = 40;

#[derive(Serialize)]
struct Row {
    t_over_tau: f64,
    image_terms: usize,
    image_micros: f64,
    spectral_modes: Option<usize>,
    spectral_micros: Option<f64>,
    cheaper: &'static str,
    note: &'static str,
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let resolved = conf::resolve(&args.common)?;
    let slab = resolved.slab()?;
    let ratios = parse_time_ratios(&args.t_over_tau)?;
    for &ratio in &ratios {
        if !(RATIO_FLOOR..=RATIO_CAP).contains(&ratio) {
            return Err(CliError::Usage(format!(
                "bench samples t/tau within [{RATIO_FLOOR}, {RATIO_CAP}], got {ratio}"
            )));
        }
    }

    let tau = slab.tau();
    let z = 0.3 * slab.thickness;
    let zp = 0.6 * slab.thickness;
    let mut rows = Vec::with_capacity(ratios.len());
    let mut crossover: Option<f64> = None;

    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
    for &ratio in &sorted {
        let t = ratio * tau;

        let started = Instant::now();
        let mut series = green_z(z, zp, t, &slab, &resolved.policy)?;
        for _ in 1..REPEATS {
            series = green_z(z, zp, t, &slab, &resolved.policy)?;
        }
        let image_micros = started.elapsed().as_secs_f64() * 1e6 / REPEATS as f64;

        let spectral = (|| -> Result<(usize, f64), SlabError> {
            let started = Instant::now();
            let mut basis = auto_basis(&slab, t)?;
            let mut value = eigen_green_z(z, zp, t, slab.kappa, &basis)?;
            for _ in 1..REPEATS {
                basis = auto_basis(&slab, t)?;
                value = eigen_green_z(z, zp, t, slab.kappa, &basis)?;
            }
            let micros = started.elapsed().as_secs_f64() * 1e6 / REPEATS as f64;
            let _ = value;
            Ok((modes_needed(&basis, slab.kappa, t, resolved.policy.abs_tol), micros))
        })();

        let row = match spectral {
            Ok((modes, micros)) => {
                let cheaper = if micros < image_micros { "spectral" } else { "image" };
                if cheaper == "spectral" && crossover.is_none() {
                    crossover = Some(ratio);
                }
                Row {
                    t_over_tau: ratio,
                    image_terms: series.terms_used,
                    image_micros,
                    spectral_modes: Some(modes),
                    spectral_micros: Some(micros),
                    cheaper,
                    note: "",
                }
            }
            Err(SlabError::Validity(_)) => Row {
                t_over_tau: ratio,
                image_terms: series.terms_used,
                image_micros,
                spectral_modes: None,
                spectral_micros: None,
                cheaper: "image",
                note: "oracle unavailable",
            },
            Err(err) => return Err(err.into()),
        };
        rows.push(row);
    }

    let text = match resolved.format {
        OutputFormat::Csv => {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{:.3},{},{},{},{}",
                        r.t_over_tau,
                        r.image_terms,
                        r.image_micros,
                        r.spectral_modes.map_or(String::new(), |m| m.to_string()),
                        r.spectral_micros.map_or(String::new(), |m| format!("{m:.3}")),
                        r.cheaper,
                        r.note
                    )
                })
                .collect();
            csv_table(
                "t_over_tau,image_terms,image_micros,spectral_modes,spectral_micros,cheaper,note",
                &lines,
            )
        }
        OutputFormat::Json => json_table(&rows)?,
    };
    write_atomic(&args.out, &text)?;

    for row in &rows {
        match (row.spectral_micros, row.note) {
            (Some(micros), _) => println!(
                "t/tau = {:>8}: image {} terms in {:.3} us, spectral {} modes in {:.3} us -> {}",
                row.t_over_tau,
                row.image_terms,
                row.image_micros,
                row.spectral_modes.unwrap_or(0),
                micros,
                row.cheaper
            ),
            (None, note) => println!(
                "t/tau = {:>8}: image {} terms in {:.3} us, spectral {}",
                row.t_over_tau, row.image_terms, row.image_micros, note
            ),
        }
    }
    match crossover {
        Some(ratio) => println!(
            "spectral route first wins near t/tau = {ratio} (machine dependent)"
        ),
        None => println!("no crossover observed in the sampled range"),
    }
    println!("wrote {}", args.out.display());
    Ok(())
}
