//! Report assembly. Maps serialize through `serde_json::Value`, whose
//! objects keep keys sorted, so equal runs give byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A checked property or implication held.
    Holds,
    Violated,
    /// A search bound stopped the check.
    Inconclusive,
    /// A plain computation with nothing to check.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub op: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub interpretation: BTreeMap<&'static str, &'static str>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            interpretation: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    /// 1 for any violation, else 3 for any inconclusive check, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Violated) > 0 {
            1
        } else if self.count(Verdict::Inconclusive) > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self, config: &RunConfig) -> Value {
        json!({
            "tool": "fmlocal",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": config,
            "interpretation": self.interpretation,
            "checks": self.checks,
            "summary": {
                "checks": self.checks.len(),
                "holds": self.count(Verdict::Holds),
                "violated": self.count(Verdict::Violated),
                "inconclusive": self.count(Verdict::Inconclusive),
                "computed": self.count(Verdict::Computed),
            },
        })
    }

    pub fn render(&self, config: &RunConfig) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json(config)).expect("report serializes");
        text.push('\n');
        text
    }
}
