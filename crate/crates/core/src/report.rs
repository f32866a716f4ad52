//! Machine-readable check reports. Field order is fixed by the struct,
//! map keys sort, so serialized reports are stable for golden-file tests.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

/// Uniform report envelope for every named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub groupoid: String,
    pub family: Vec<String>,
    pub status: Status,
    pub witnesses: Vec<Value>,
    pub max_residual: f64,
    pub seed: u64,
    pub details: Value,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, groupoid: impl Into<String>, seed: u64) -> CheckReport {
        CheckReport {
            check: check.into(),
            groupoid: groupoid.into(),
            family: Vec::new(),
            status: Status::Pass,
            witnesses: Vec::new(),
            max_residual: 0.0,
            seed,
            details: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
