use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmc_core::ld::{Family, Ordering, RandomizationKind};

#[derive(Debug, Parser)]
#[command(
    name = "qmc",
    version,
    about = "Quasi-Monte Carlo point generation and adaptive cubature"
)]
pub struct Cli {
    /// Read further flags from a file of `key = value` lines (flag names without `--`).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write points with indices [n-start, n-end) as CSV or JSON.
    Points(PointsArgs),
    /// Integrate a problem to a tolerance and print the result record.
    Integrate(IntegrateArgs),
    /// Sweep tolerances over several stopping criteria.
    Compare(CompareArgs),
    /// Centered L2 discrepancy and stratification of a point set.
    Discrepancy(DiscrepancyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Lattice,
    Net,
    Halton,
    Iid,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Lattice => Family::Lattice,
            FamilyArg::Net => Family::DigitalNet,
            FamilyArg::Halton => Family::Halton,
            FamilyArg::Iid => Family::Iid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Natural,
    Linear,
    Standard,
    Gray,
    Sequential,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Ordering {
        match o {
            OrderingArg::Natural => Ordering::Natural,
            OrderingArg::Linear => Ordering::Linear,
            OrderingArg::Standard => Ordering::Standard,
            OrderingArg::Gray => Ordering::Gray,
            OrderingArg::Sequential => Ordering::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomizeArg {
    /// The family's default randomization.
    Auto,
    None,
    Shift,
    DigitalShift,
    Lms,
    DigitShift,
}

impl RandomizeArg {
    pub fn kind(self, family: Family) -> RandomizationKind {
        match self {
            RandomizeArg::Auto => RandomizationKind::default_for(family),
            RandomizeArg::None => RandomizationKind::None,
            RandomizeArg::Shift => RandomizationKind::ShiftMod1,
            RandomizeArg::DigitalShift => RandomizationKind::DigitalShift,
            RandomizeArg::Lms => RandomizationKind::LmsWithDigitalShift,
            RandomizeArg::DigitShift => RandomizationKind::DigitShift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Keister,
    AsianCall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LadderArg {
    /// The matching Gaussian N(0, I/2).
    Default,
    /// Standard normal quantiles onto R^d, weighted against Lebesgue measure.
    Lebesgue,
    /// Points mimic N(0, v I) with v from --ladder-var.
    Gauss,
    /// Kumaraswamy warp followed by N(0, I).
    GaussKuma,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// Point family (default: lattice for points, the criterion's family otherwise).
    #[arg(long)]
    pub family: Option<FamilyArg>,
    /// Dimension (default: 2 for points, 5 for keister, 16 for asian-call).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub ordering: Option<OrderingArg>,
    #[arg(long, default_value = "auto")]
    pub randomize: RandomizeArg,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Lattice vector or Joe-Kuo direction-number file for the chosen family.
    #[arg(long, value_name = "FILE")]
    pub gen_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Omit wall-clock times, making output a pure function of the flags.
    #[arg(long)]
    pub no_time: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, default_value = "keister")]
    pub problem: ProblemArg,
    #[arg(long, default_value = "default")]
    pub ladder: LadderArg,
    #[arg(long, default_value_t = 0.75)]
    pub ladder_var: f64,
    #[arg(long, default_value_t = 0.8)]
    pub kuma_alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub kuma_beta: f64,
    #[arg(long, default_value_t = 100.0)]
    pub s0: f64,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 0.05)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0)]
    pub drift: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CriterionArgs {
    #[arg(long, default_value_t = 1e-2)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rel_tol: f64,
    #[arg(long)]
    pub m_min: Option<u32>,
    /// Budget as log2 of the sample size (per replication for qmc-rep).
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub replications: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 0)]
    pub n_start: u64,
    #[arg(long, default_value_t = 8)]
    pub n_end: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// qmc-rep, qmc-net-decay, qmc-lattice-decay or mc-clt.
    #[arg(long, default_value = "qmc-net-decay")]
    pub criterion: String,
    #[command(flatten)]
    pub criterion_args: CriterionArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Comma-separated stopping criteria, each run on its default family.
    #[arg(
        long,
        default_value = "mc-clt,qmc-lattice-decay",
        value_delimiter = ','
    )]
    pub methods: Vec<String>,
    /// Comma-separated absolute tolerances.
    #[arg(long, default_value = "1e-1,1e-2", value_delimiter = ',')]
    pub tolerances: Vec<f64>,
    #[command(flatten)]
    pub criterion_args: CriterionArgs,
    /// Also write a log-log chart of n and time against the tolerance.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 0)]
    pub n_start: u64,
    #[arg(long, default_value_t = 256)]
    pub n_end: u64,
    /// Read the points from a CSV file instead of generating them.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Compare the median discrepancy over --seeds randomizations with IID points.
    #[arg(long)]
    pub compare_iid: bool,
    #[arg(long, default_value_t = 30)]
    pub seeds: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}
