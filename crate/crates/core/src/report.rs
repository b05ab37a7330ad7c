//! Machine-readable verification reports. Reports are deterministic for
//! a fixed (config, seed) pair: no wall-clock content is serialized;
//! timings go to the human summary instead.

use serde::{Deserialize, Serialize};

/// One compared series coefficient: slot, short digests of both sides,
/// and whether they agreed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub z_exp: i64,
    pub d_exp: i64,
    pub left: String,
    pub right: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub coefficients: Vec<CoefficientRecord>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>, details: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: true,
            details: details.into(),
            witness: None,
            coefficients: Vec::new(),
        }
    }

    pub fn fail(
        name: impl Into<String>,
        details: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: false,
            details: details.into(),
            witness: Some(witness.into()),
            coefficients: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, scenario: Option<String>, checks: Vec<CheckOutcome>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            scenario,
            checks,
            pass,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(seed: u64, suites: Vec<SuiteReport>) -> Self {
        let pass = suites.iter().all(|s| s.pass);
        RunReport {
            tool: "gaudin-verify".into(),
            seed,
            suites,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
