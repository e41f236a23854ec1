use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "srint",
    version,
    about = "First integrals and reduced dynamics of sub-Riemannian geodesic flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an algebra, its realization and every claimed integral.
    Verify(VerifyArgs),
    /// Prolongation/rank test for a polynomial integral of given degree.
    Obstruct(ObstructArgs),
    /// Reduce by the Noether momenta and normalize Q.
    Reduce(ReduceArgs),
    /// Integrate x' = cos z, y' = sin z, z' = Q(x, y).
    Integrate(IntegrateArgs),
    /// Poincaré section of the reduced flow.
    Section(SectionArgs),
    /// Emit the datasets and portraits of one figure's parameter sets.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Catalog name, or a path to an algebra file (verify only).
    pub system: String,
    /// Metric parameters of gen6/gen6h, e.g. `a=1,b=2`.
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Write the run report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ObstructArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Degree of the candidate integral in the momenta.
    #[arg(short = 'd', long)]
    pub degree: usize,
    /// Prolongation order; defaults to degree + 1.
    #[arg(long)]
    pub prolong: Option<usize>,
    /// Rank over GF(p).
    #[arg(long = "mod", value_name = "P", conflicts_with_all = ["auto_primes", "exact"])]
    pub modulus: Option<u64>,
    /// Try a fixed sequence of large primes; stop at the first success.
    #[arg(long, conflicts_with = "exact")]
    pub auto_primes: bool,
    /// Rank over the rationals (the default).
    #[arg(long)]
    pub exact: bool,
    /// Write the obstruction report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Permit runs with large prolonged systems (also `SRINT_ALLOW_LONG=1`).
    #[arg(long)]
    pub allow_long: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Noether constants, e.g. `c5=-1/10,c6=20`; missing ones are zero.
    #[arg(long = "c", allow_hyphen_values = true)]
    pub constants: Option<String>,
    /// Write the reduction report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct NumericArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub atol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub h_init: f64,
    #[arg(long, default_value_t = 0.1)]
    pub hmax: f64,
    #[arg(long, default_value_t = 500_000_000)]
    pub max_steps: u64,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// Normal form: `Q1:a,b`, `Q2:a,b,c` or `C:c`.
    #[arg(long = "Q", allow_hyphen_values = true)]
    pub q: String,
    /// Initial `x,y,z` at t = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub ic: String,
    /// Final time.
    #[arg(long)]
    pub tmax: f64,
    /// Also write the states with `t` in `t0:t1` to `<out>.window.csv`.
    #[arg(long)]
    pub window: Option<String>,
    /// Trajectory CSV; standard output when absent. A JSON sidecar is
    /// written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Scatter of (z, z') as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub num: NumericArgs,
}

#[derive(Debug, Args)]
pub struct SectionArgs {
    /// Normal form: `Q1:a,b`, `Q2:a,b,c` or `C:c`.
    #[arg(long = "Q", allow_hyphen_values = true)]
    pub q: String,
    /// Initial `x,y,z`; repeat for several orbits, which run in parallel.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub ic: Vec<String>,
    /// Surface and direction, e.g. `z=0:+` or `x=0:-`.
    #[arg(long, allow_hyphen_values = true)]
    pub surface: String,
    /// Crossings per orbit.
    #[arg(long)]
    pub count: usize,
    /// Section CSV; with several orbits, `<stem>_<i>.csv` per orbit.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Scatter of the section points as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub num: NumericArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 1 to 5.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub number: u8,
    /// Directory for the CSV, SVG and JSON outputs.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Divide point counts and times by 20.
    #[arg(long)]
    pub quick: bool,
}
