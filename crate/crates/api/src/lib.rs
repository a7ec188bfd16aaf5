//! Wire types for the latdist HTTP API and the CLI report format.
//!
//! `RunReport` is the machine-readable record every distance/oracle run
//! produces; its JSON key order is fixed by declaration order and it
//! round-trips losslessly.

use serde::{Deserialize, Serialize};

pub const API_BASE: &str = "/api/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputInfo,
    pub config: ConfigEcho,
    pub result: ResultInfo,
    pub stats: StatsInfo,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub file: String,
    /// "matrix" or "alist".
    pub format: String,
    /// Field spec string, e.g. "3" or "2^6:0x43".
    pub field: String,
    pub n: u64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub beta: u64,
    pub delta: f64,
    pub scale: u64,
    pub threads: u64,
    pub node_budget: u64,
    pub certify: bool,
    pub harvest_rounds: u64,
    pub binary_image: bool,
    pub full_radius: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultInfo {
    pub d_best: u64,
    /// Witness codeword symbols in the input coordinate order.
    pub witness: Vec<u64>,
    /// "certified", "heuristic" or "partial".
    pub status: String,
    pub progress: ProgressInfo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressInfo {
    pub searched: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsInfo {
    pub wall_ms: u64,
    pub nodes: u64,
    pub reduction_rounds: u64,
    /// Field the run was performed over, for reproducibility (the
    /// extension modulus matters for binary images).
    pub field_rep: String,
    /// (n, k) of the binary image when one was taken.
    pub image: Option<(u64, u64)>,
}

/// Exit codes are a function of the result status alone.
pub const STATUS_EXIT_TABLE: &[(&str, i32)] =
    &[("certified", 0), ("heuristic", 2), ("partial", 2)];

pub fn exit_code_for_status(status: &str) -> i32 {
    STATUS_EXIT_TABLE
        .iter()
        .find(|(s, _)| *s == status)
        .map(|(_, c)| *c)
        .unwrap_or(EXIT_INTERNAL)
}

pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    /// "parse", "validation", "budget" or "internal".
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub error: ErrorInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthInfo {
    pub status: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobRequest {
    /// "distance" or "oracle".
    pub kind: String,
    pub input_name: String,
    pub input_text: String,
    /// "matrix" or "alist".
    pub format: String,
    /// Field spec string; inferred from the input header when absent.
    pub field: Option<String>,
    #[serde(default)]
    pub binary_image: bool,
    #[serde(default)]
    pub config: JobConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub beta: u64,
    pub delta: f64,
    pub scale: u64,
    pub threads: u64,
    pub node_budget: u64,
    pub certify: bool,
    pub harvest_rounds: u64,
    pub full_radius: bool,
    /// Brute-force message cap for oracle jobs.
    pub max_messages: u64,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            beta: 20,
            delta: 0.99,
            scale: 1,
            threads: 1,
            node_budget: 1 << 36,
            certify: true,
            harvest_rounds: 1,
            full_radius: false,
            max_messages: 1 << 28,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobCreated {
    pub id: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobStatus {
    pub id: u64,
    /// "queued", "running", "done" or "failed".
    pub state: String,
    pub stage: String,
    pub progress: ProgressInfo,
    pub error: Option<ErrorInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceRequest {
    pub basis_text: String,
    pub beta: u64,
    pub delta: f64,
    #[serde(default)]
    pub check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceResponse {
    pub basis_text: String,
    pub predicates: Option<PredicateReport>,
}

/// Verified reduction predicates of the output basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub beta: u64,
    pub delta: f64,
    pub size_reduced: bool,
    pub max_abs_mu: f64,
    pub lovasz: bool,
    pub block_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRequest {
    pub m: u32,
    pub n: u32,
    /// Max column norm M of the equivalent Diophantine system.
    pub max_col_norm: f64,
    pub r_max: f64,
    pub delta: f64,
    pub beta: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResponse {
    /// Exact integers as decimal strings; they can be astronomically large.
    pub lll_bound: String,
    pub bkz_bound: String,
    pub hermite_upper: f64,
}
