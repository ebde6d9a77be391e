use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "toricfan",
    version,
    about = "Central chamber, fan and toric Gröbner basis reports for K_{n,m}"
)]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline for one instance and emit a report
    Report(ReportArgs),
    /// Check the K_{3,5} instance end to end against its known counts
    VerifyExample(VerifyArgs),
    /// Facets of the central chamber
    Facets(FacetArgs),
    /// Reduced Gröbner basis of the toric ideal
    Groebner(GroebnerArgs),
    /// Primitive collections (or maximal simplices) of the central triangulation
    Primitives(PrimitiveArgs),
    /// Solve an integer program by Gröbner-basis reduction
    Ip(IpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Either a family instance `K_{2k-1,2k+1}` or an explicit `K_{n,m}`.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Family index: K_{2k-1, 2k+1}
    #[arg(long, conflicts_with_all = ["n", "m"], required_unless_present_all = ["n", "m"])]
    pub k: Option<usize>,
    /// Left part size of K_{n,m}
    #[arg(long, requires = "m")]
    pub n: Option<usize>,
    /// Right part size of K_{n,m}
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GbArgs {
    /// Skip the Gröbner basis and everything that depends on it
    #[arg(long, conflicts_with = "gb")]
    pub no_gb: bool,
    /// Compute the Gröbner basis even for large instances
    #[arg(long)]
    pub gb: bool,
    /// Maximum number of S-pairs before giving up
    #[arg(long, default_value_t = 1_000_000)]
    pub gb_budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub gb: GbArgs,
    /// Seed for every randomized check
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Include wall-clock timings (makes the output non-reproducible)
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Deliberately corrupt one pipeline stage (for testing the checker)
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// orient hyperplanes with balance exactly one the wrong way
    Orientation,
}

#[derive(Debug, Clone, Args)]
pub struct FacetArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Solve one LP per plane instead of one per symmetry orbit
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GroebnerArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Write to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    pub gb_budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PrimitiveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Emit the maximal simplices instead of the primitive collections
    #[arg(long)]
    pub triangulation: bool,
    /// Write to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IpArgs {
    /// Constraint matrix A in the integer matrix text format
    #[arg(long, value_name = "FILE")]
    pub matrix: PathBuf,
    /// Right-hand side b (comma separated); defaults to A * start
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<i64>>,
    /// Cost vector c (comma separated, nonnegative)
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<i64>,
    /// Feasible nonnegative start point (comma separated)
    #[arg(long, value_delimiter = ',', required = true)]
    pub start: Vec<i64>,
    /// Cross-check the optimum by exhaustive fiber enumeration
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub gb_budget: usize,
    /// Write to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
