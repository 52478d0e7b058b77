//! JSON summaries printed under `--json`. Real numbers are strings in
//! scientific notation so no precision is lost to `f64`.

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BrokenSummary {
    pub ring: String,
    pub d: usize,
    pub q: usize,
    pub p: usize,
    pub repeats_budget: u64,
    pub decomposition_rank: usize,
    pub verified: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    /// `YES` or `NO`.
    pub answer: String,
    pub backend: String,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub k: usize,
    pub seed: u64,
    /// `empty`, `single`, `pair` or `triple`.
    pub witness: Option<String>,
    pub triple: Option<[usize; 3]>,
    pub triples_tried: usize,
    pub repeats: u64,
    pub broken: Option<BrokenSummary>,
    /// The baseline's answer when `--oracle` is set.
    pub oracle: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Partition3Report {
    pub backend: String,
    pub ring: String,
    pub n: usize,
    pub seed: u64,
    /// Exact backend: the count in the chosen ring.
    pub count: Option<String>,
    /// Broken backend: whether some repeat detected a partition.
    pub found: Option<bool>,
    pub repeats: Option<u64>,
    pub broken: Option<BrokenSummary>,
    pub oracle: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConvolveReport {
    pub n: usize,
    pub ring: String,
    pub entries: Vec<String>,
    pub oracle: Option<bool>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub target: String,
    pub kind: String,
    pub ok: bool,
    pub checks: Vec<Check>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeReport {
    pub precision_bits: usize,
    pub printed_digits: usize,
    pub sigma: String,
    pub tau: String,
    pub rho: String,
    pub n: usize,
    pub theta: String,
    pub theta_pow_n: String,
    pub repeats: String,
    pub b1: String,
    pub b2: String,
    pub max_base: String,
    pub margin: String,
    pub delta: String,
    pub below_two: bool,
    pub margin_exceeds_delta: bool,
    pub kappa: String,
    pub beta: String,
    pub constants_lhs: String,
    pub largest_epsilon: String,
    pub holds_at_epsilon_kappa: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchRow {
    pub n: usize,
    pub convolution_ms: f64,
    pub partition_count_ms: f64,
    pub solve_exact_ms: f64,
    pub bellman_ms: f64,
    pub agree: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}
