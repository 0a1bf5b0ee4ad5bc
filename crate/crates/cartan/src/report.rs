//! Suite reports.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Mismatch on a statement that is recorded but not asserted.
    Anomaly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: &str) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.to_string(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, anchor: &str, witness: Value) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.to_string(),
            status: Status::Fail,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u32,
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub params: Params,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// Checks whose name starts with `prefix`.
    pub fn checks_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The report with the timing field zeroed, for comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        SuiteReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} pass, {} fail, {} anomaly ({} ms)",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Anomaly),
            self.elapsed_ms
        )
    }
}
