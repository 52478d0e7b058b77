use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tcover", version, about = "Set cover and three-way partitioning via tensor decompositions")]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Print a JSON summary instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether an instance has a cover with at most t sets.
    Solve(SolveArgs),
    /// Count or detect three-way partitions from three families.
    Partition3(Partition3Args),
    /// Subset convolution of two vectors.
    Convolve(ConvolveArgs),
    /// Check a tensor, decomposition or built-in witness.
    Verify(VerifyArgs),
    /// Evaluate θ, the repeat count and the running-time bases.
    Analyze(AnalyzeArgs),
    /// Time the solvers on random inputs.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    /// Exact for n ≤ 20, broken above.
    Auto,
    Exact,
    Broken,
}

/// Parameters of the broken algorithm.
#[derive(Args, Debug, Clone)]
pub struct BrokenArgs {
    /// Coefficient ring of the Q decomposition: q, gf2, gf3, gf5, gf7.
    #[arg(long)]
    pub ring: Option<String>,
    /// Fraction of the universe covered by Q blocks.
    #[arg(long, default_value = "1/1000")]
    pub sigma: String,
    /// Slack in the part-size cap (1/3 + τ)n.
    #[arg(long, default_value = "1/1000")]
    pub tau: String,
    /// Kronecker power of Q per block group.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Number of Q^⊗d factors; defaults to ⌊σn/d⌋.
    #[arg(long)]
    pub q: Option<usize>,
    /// Permutation repeats; defaults to ⌈θ^{-n}·n⌉.
    #[arg(long)]
    pub repeats: Option<u64>,
    /// A `qdecomp` file to use instead of the trivial decomposition.
    #[arg(long)]
    pub decomp: Option<PathBuf>,
    /// Accept the decomposition file without checking it.
    #[arg(long)]
    pub skip_verify: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file (`setcover n m t`).
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
    #[command(flatten)]
    pub broken: BrokenArgs,
    /// Cross-check with the dynamic-programming baseline (exit 3 on disagreement).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct Partition3Args {
    /// Three family files over the same universe.
    #[arg(num_args = 3, required = true)]
    pub families: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = BackendChoice::Exact)]
    pub backend: BackendChoice,
    #[command(flatten)]
    pub broken: BrokenArgs,
    /// Cross-check the exact count by brute force.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    /// Two `vector` files with the same ring.
    #[arg(num_args = 2, required = true)]
    pub vectors: Vec<PathBuf>,
    /// Cross-check against the direct O(3^n) sum.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A file, or `p-border` for the shipped border witness of P, or `q`
    /// for the properties of Q.
    pub target: String,
    /// Tensor file a rank or border decomposition should reproduce.
    #[arg(long)]
    pub tensor: Option<PathBuf>,
    /// Read an integer-valued file over this ring instead of its own.
    #[arg(long)]
    pub ring: Option<String>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, default_value = "1/1000")]
    pub sigma: String,
    #[arg(long, default_value = "1/1000")]
    pub tau: String,
    #[arg(long, default_value = "1/1000")]
    pub rho: String,
    /// Universe size for θ^n and the repeat count.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value = "1/10000000")]
    pub kappa: String,
    #[arg(long, default_value = "1/100000")]
    pub beta: String,
    /// The target gap δ the margin is compared against.
    #[arg(long, default_value = "1/100000")]
    pub delta: String,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Largest universe size.
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Smallest universe size.
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
}
