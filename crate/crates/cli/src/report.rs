use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wtc_core::{all_pass, Check};

pub const SCHEMA: &str = "wtc-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Toolchain {
    pub wtc: String,
    pub rustc: String,
}

impl Toolchain {
    pub fn current() -> Self {
        Toolchain { wtc: env!("CARGO_PKG_VERSION").into(), rustc: env!("WTC_RUSTC_VERSION").into() }
    }
}

/// Everything a command produced. `wall_seconds` is the only field that
/// varies between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub toolchain: Toolchain,
    pub parameters: BTreeMap<String, Value>,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    pub wall_seconds: f64,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            toolchain: Toolchain::current(),
            parameters: BTreeMap::new(),
            pass: true,
            checks: Vec::new(),
            result: Value::Null,
            wall_seconds: 0.0,
            text: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), serde_json::to_value(value).expect("parameters serialize"));
        self
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn finish(mut self, result: Value) -> Self {
        self.result = result;
        self.pass = all_pass(&self.checks);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.text.clone();
        for c in &self.checks {
            let _ = writeln!(out, "{c}");
        }
        let _ =
            writeln!(out, "{}: {} ({:.2}s)", self.command, if self.pass { "pass" } else { "FAIL" }, self.wall_seconds);
        out
    }
}
