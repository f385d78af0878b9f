use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcdk_core::IntegerInterval;

#[derive(Debug, Parser)]
#[command(name = "lcdk", version, about = "Verify discrete log-concavity and the inequalities built on it")]
pub struct Cli {
    /// Arithmetic for sequence inputs; defaults to the file's declared backend, else rational.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Fail a verification when its worst slack is below `−tolerance`
    /// (default: each check's own tolerance).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Predicate {
    LogConcave,
    LogAffine,
    Unimodal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a sequence file for log-concavity, log-affinity and unimodality.
    Check {
        file: PathBuf,
        /// `counting`, a reference JSON file, or inline reference JSON.
        #[arg(long, default_value = "counting")]
        reference: String,
        /// Predicates that decide the exit code (all are reported).
        #[arg(long, value_enum, value_delimiter = ',', default_value = "log-concave")]
        require: Vec<Predicate>,
    },
    /// Maximize a convex functional over log-concave laws under `E[h] ≥ 0`.
    Extremize {
        #[arg(long)]
        interval: IntegerInterval,
        /// `tail>t`, `tail>=t`, `moment:r`, `collision`, `neg-entropy` or `table:FILE`.
        #[arg(long)]
        functional: String,
        /// `mean<=c`, `mean>=c`, `const:v` or `table:FILE` (values of `h`).
        #[arg(long)]
        constraint: String,
        #[arg(long, default_value = "counting")]
        reference: String,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Compare against the best of N random feasible laws.
        #[arg(long)]
        oracle: Option<u64>,
    },
    /// Run an inequality sweep.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Convolve two sequence files and test the result.
    Convolve {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "counting")]
        reference: String,
    },
    /// Truncated-geometric closed forms.
    Geom {
        #[command(subcommand)]
        quantity: GeomQuantity,
    },
    /// Emit random log-concave laws.
    Sample {
        #[arg(long)]
        interval: IntegerInterval,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value = "counting")]
        reference: String,
    },
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long)]
    pub interval: Option<IntegerInterval>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value = "counting")]
    pub reference: String,
}

#[derive(Debug, Subcommand)]
pub enum VerifyKind {
    /// `E[f₁]^α E[f₂]^β ≤ E[f₃]^α E[f₄]^β` on log-affine and log-concave laws.
    FourFunctions {
        #[arg(long, num_args = 4, value_names = ["F1", "F2", "F3", "F4"])]
        functions: Vec<PathBuf>,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Exact log-concavity of convolutions of random log-concave pairs.
    Convolution {
        #[arg(long, default_value_t = 30)]
        max_len: usize,
        /// Also check the geometric-series identity up to this exponent.
        #[arg(long, default_value_t = 12)]
        max_m: u32,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Sup-convolution inequality on random unimodal pairs.
    PrekopaLeindler {
        #[arg(long = "t", value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        ts: Vec<f64>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// `μ(A) ≥ μ(A_δ)^δ μ(K)^{1−δ}`.
    Dilation {
        /// Every subset of K (|K| ≤ 20); otherwise random subsets.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long = "delta", value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        deltas: Vec<f64>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Modulus of regularity of the identity against `2/t`.
    Modulus {
        #[arg(long = "t", value_delimiter = ',', default_value = "2,3,4,6,8,16")]
        ts: Vec<f64>,
        #[arg(long)]
        interval: Option<IntegerInterval>,
    },
    /// Median and mean deviation bounds.
    Deviation {
        /// Check one law from a file instead of a random sweep.
        #[arg(long)]
        law: Option<PathBuf>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// `E[X^s]^{1/s} ≤ 5s(se)^{1/s}(E[X^r]^{1/r} + 1)/2`.
    ReverseJensen {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long)]
        law: Option<PathBuf>,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Witness of `max P(X ≥ t)` under `E[X] ≤ c` starts at the left end.
    TailShape {
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        interval: Option<IntegerInterval>,
    },
}

#[derive(Debug, Args)]
pub struct GeomArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub k: i64,
    #[arg(long)]
    pub l: i64,
}

#[derive(Debug, Subcommand)]
pub enum GeomQuantity {
    /// Normalizing constant `C`.
    Constant(GeomArgs),
    Mean(GeomArgs),
    /// `P(X > t)`.
    Tail {
        #[command(flatten)]
        params: GeomArgs,
        #[arg(long)]
        t: f64,
    },
    /// `p` with the given mean on `⟦k, l⟧`.
    SolveP {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        c: f64,
    },
    /// `Σ_{n=0}^{N} n pⁿ`.
    WeightedSum {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: u64,
    },
}
