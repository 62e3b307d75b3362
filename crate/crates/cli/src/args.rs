//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ksep_core::search::{DEFAULT_BRUTE_CAP, DEFAULT_VERTEX_CAP};
use ksep_core::{Method, SampleMode};

#[derive(Debug, Parser)]
#[command(
    name = "ksep",
    version,
    about = "Intersecting families of circular k-separated sets",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Lines)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Lines,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every k-separated r-subset of the n-circle.
    Enumerate(InstanceArgs),
    /// Closed-form count of k-separated r-sets, for one n or a range.
    Count(CountArgs),
    /// The star of a point: every k-separated r-set containing it.
    Star(StarArgs),
    /// Exact maximum intersecting family of one instance.
    Max(MaxArgs),
    /// Compare exact maxima with the predicted bound over a grid.
    VerifyBound(VerifyArgs),
    /// Compress a family and check the decomposition step.
    Compress(CompressArgs),
    /// Run the decomposition checks on sampled or all intersecting families.
    CheckProof(CheckProofArgs),
    /// Replay the induction on a family and print the certificate tree.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct InstanceArgs {
    /// Circle length.
    #[arg(long)]
    pub n: u32,
    /// Minimum number of unchosen points between chosen ones.
    #[arg(long)]
    pub k: u32,
    /// Set size.
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Circle length; use --n-min/--n-max for a range instead.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"], required_unless_present_all = ["n_min", "n_max"])]
    pub n: Option<u32>,
    #[arg(long, requires = "n_max")]
    pub n_min: Option<u32>,
    #[arg(long, requires = "n_min")]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Args)]
pub struct StarArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Centre of the star.
    #[arg(long, default_value_t = 1)]
    pub x: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Clique,
    Bruteforce,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Clique => Method::Clique,
            MethodArg::Bruteforce => Method::Bruteforce,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Clique)]
    pub method: MethodArg,
    /// Largest vertex count the clique method accepts.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,
    /// Largest vertex count the brute-force method accepts.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    pub brute_cap: usize,
    /// For k = 0, search the whole graph instead of the shifted core.
    #[arg(long)]
    pub no_shifted_core: bool,
    /// Fill in the millis column; wall-clock times make output irreproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct MaxArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also print the maximum family.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 14)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    #[arg(long, default_value_t = 1)]
    pub r_min: u32,
    #[arg(long, default_value_t = 5)]
    pub r_max: u32,
    /// Add the k = 0 rows (n >= 2r), checked against binom(n-1, r-1).
    #[arg(long)]
    pub include_ekr: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    /// Family in JSON form.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Include every intermediate family in the JSON output.
    #[arg(long)]
    pub members: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Greedy,
    StarSeeded,
    ShiftActive,
    /// Cycle through the three generators.
    Mixed,
}

impl ModeArg {
    pub fn for_sample(self, index: u64) -> SampleMode {
        match self {
            ModeArg::Greedy => SampleMode::Greedy,
            ModeArg::StarSeeded => SampleMode::StarSeeded,
            ModeArg::ShiftActive => SampleMode::ShiftActive,
            ModeArg::Mixed => [
                SampleMode::Greedy,
                SampleMode::StarSeeded,
                SampleMode::ShiftActive,
            ][(index % 3) as usize],
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckProofArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Number of seeded samples.
    #[arg(long, conflicts_with = "exhaustive", default_value_t = 1000)]
    pub samples: u64,
    /// Check every intersecting family instead of samples.
    #[arg(long)]
    pub exhaustive: bool,
    /// Base seed; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Acceptance probability of each candidate set while sampling.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Mixed)]
    pub mode: ModeArg,
    /// Largest graph the exhaustive mode accepts.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    pub vertex_cap: usize,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Family in JSON form.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
}
