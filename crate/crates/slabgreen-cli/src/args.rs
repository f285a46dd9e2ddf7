//! Flag definitions for the six subcommands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "slabgreen",
    version,
    about = "Green's functions and temperature histories for a uniform slab \
             with symmetric Robin walls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate the axial Green's function on a (z, zp, t) lattice.
    Greens(GreensArgs),
    /// Temperature history of an initially uniform layer.
    Profile(ProfileArgs),
    /// Emit half-layer temperature profiles for a family of Biot numbers.
    Fig2(Fig2Args),
    /// Dump the eigenvalue table of the wall condition.
    Roots(RootsArgs),
    /// Run the built-in consistency suites.
    Validate(ValidateArgs),
    /// Compare the cost of the image-series and spectral paths.
    Bench(BenchArgs),
}

/// Flags shared by every subcommand. All are optional so that a config
/// file or the environment can fill them in; see `conf` for precedence.
#[derive(Args)]
pub struct CommonArgs {
    /// Layer thickness L.
    #[arg(long)]
    pub thickness: Option<f64>,

    /// Thermal diffusivity kappa.
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Biot number Bi = L*lambda/2 ("inf" for walls held at the bath
    /// temperature). fig2 accepts a comma-separated list.
    #[arg(long, conflicts_with_all = ["lambda", "robin"])]
    pub bi: Option<String>,

    /// Wall conductance lambda (one over length).
    #[arg(long, conflicts_with = "robin")]
    pub lambda: Option<f64>,

    /// Boundary kind: "inf" holds the walls at the bath temperature.
    #[arg(long)]
    pub robin: Option<String>,

    /// Absolute truncation tolerance threaded into the image series.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Largest image ring the series may use.
    #[arg(long)]
    pub n_max: Option<usize>,

    /// Safety factor applied to the truncation bound.
    #[arg(long)]
    pub safety: Option<f64>,

    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output format for emitted tables.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
pub struct GreensArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Observer coordinates, comma separated (default: an --nz lattice).
    #[arg(long)]
    pub z: Option<String>,

    /// Source coordinates, comma separated (default: an --nzp lattice).
    #[arg(long)]
    pub zp: Option<String>,

    /// Observer lattice size when --z is not given.
    #[arg(long, default_value_t = 11)]
    pub nz: usize,

    /// Source lattice size when --zp is not given.
    #[arg(long, default_value_t = 11)]
    pub nzp: usize,

    /// Evaluation times as t/tau, comma separated.
    #[arg(long, default_value = "1")]
    pub t_over_tau: String,

    /// Output file.
    #[arg(long, default_value = "greens.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Coordinates, comma separated (default: an --nz lattice over [0, L]).
    #[arg(long)]
    pub z: Option<String>,

    /// Lattice size when --z is not given.
    #[arg(long, default_value_t = 51)]
    pub nz: usize,

    /// Evaluation times as t/tau, comma separated.
    #[arg(long, default_value = "1")]
    pub t_over_tau: String,

    /// Output file.
    #[arg(long, default_value = "profile.csv")]
    pub out: PathBuf,

    /// Also emit a line chart next to the data file.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Half-layer lattice size on [0, L/2].
    #[arg(long, default_value_t = 51)]
    pub nz: usize,

    /// Number of time slices; slice j sits at t = j/nt of the full span.
    #[arg(long, default_value_t = 60)]
    pub nt: usize,

    /// Full time span in units of tau.
    #[arg(long, default_value_t = 1.0)]
    pub t_max_over_tau: f64,

    /// Directory receiving one file per Biot number.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,

    /// Also emit a line chart next to each data file.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Number of eigenvalues to emit.
    #[arg(long, default_value_t = 20)]
    pub count: usize,

    /// Output file.
    #[arg(long, default_value = "roots.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Which consistency suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    /// Limiting forms: conservation, wall limits, half-space agreement.
    Limits,
    /// Finite-difference residuals of the field equation and walls.
    Residuals,
    /// Image series against the spectral path.
    Oracle,
    /// Image-weight tables and the kernel of their recurrences.
    Coefficients,
    /// Everything above.
    All,
}

#[derive(Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Sampled times as t/tau, comma separated, each within [1e-4, 10].
    #[arg(long, default_value = "0.0001,0.001,0.01,0.05,0.2,1,5,10")]
    pub t_over_tau: String,

    /// Output file.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
}
