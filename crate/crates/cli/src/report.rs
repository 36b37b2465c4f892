use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Outcome carried by the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    Negative,
}

/// What a command prints. Everything here is a function of the inputs and the
/// engine version; wall-clock timings are only included on request because
/// they would break byte-for-byte reproducibility.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub engine: String,
    pub convention: u32,
    /// Input name to `sha256:<hex>` of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            version: REPORT_FORMAT_VERSION,
            command: command.to_string(),
            engine: env!("CARGO_PKG_VERSION").to_string(),
            convention: khoxotic::CONVENTION_VERSION,
            inputs: BTreeMap::new(),
            outcome: Outcome::Success,
            results: Value::Null,
            timings_ms: None,
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.insert(name.to_string(), format!("sha256:{}", crate::cache::sha256_hex(bytes)));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Success => 0,
            Outcome::Negative => 1,
        }
    }
}

/// Integers in reports: JSON numbers when they fit, decimal strings beyond.
pub fn int(v: &BigInt) -> Value {
    v.to_i64().map_or_else(|| Value::String(v.to_string()), Value::from)
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}
