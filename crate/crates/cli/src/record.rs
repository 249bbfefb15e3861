//! One JSON line per result.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Pass,
    Skipped,
    Fail,
    Degenerate,
    /// Non-normal index on a solve.
    NotNormal,
    /// Violated precondition.
    Hypothesis,
    Error,
}

impl Status {
    /// Process exit code contributed by a record; the run exits with the
    /// most severe one.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Pass | Status::Skipped => 0,
            Status::Fail | Status::Degenerate | Status::Error => 1,
            Status::NotNormal => 2,
            Status::Hypothesis => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub command: String,
    /// SHA-256 of the canonical system serialization.
    pub system: String,
    pub seed: Option<u64>,
    pub index: Option<Vec<usize>>,
    pub status: Status,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing: Timing,
}

impl ResultRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Exit code of a whole run. Hypothesis violations take precedence, then
/// non-normal solves, then failures.
pub fn run_exit_code(records: &[ResultRecord]) -> i32 {
    let codes: Vec<i32> = records.iter().map(|r| r.status.exit_code()).collect();
    for c in [3, 2, 1] {
        if codes.contains(&c) {
            return c;
        }
    }
    0
}
