//! Versioned JSON reports. Keys come out sorted, so equal runs give equal bytes.

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    config: Value,
    checks: Map<String, Value>,
    verdict: bool,
}

impl Report {
    pub fn new(command: &str, config: impl Serialize) -> Self {
        Report {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("serializable config"),
            checks: Map::new(),
            verdict: true,
        }
    }

    /// Record a named check; the overall verdict is the conjunction.
    pub fn check(&mut self, name: &str, pass: bool, detail: impl Serialize) {
        self.verdict &= pass;
        let mut entry = Map::new();
        entry.insert("pass".into(), Value::Bool(pass));
        entry.insert("detail".into(), serde_json::to_value(detail).expect("serializable detail"));
        self.checks.insert(name.to_string(), Value::Object(entry));
    }

    /// Informational data without a verdict.
    pub fn data(&mut self, name: &str, detail: impl Serialize) {
        self.checks.insert(name.to_string(), serde_json::to_value(detail).expect("serializable detail"));
    }

    pub fn verdict(&self) -> bool {
        self.verdict
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("config".into(), self.config.clone());
        m.insert("checks".into(), Value::Object(self.checks.clone()));
        m.insert("verdict".into(), Value::Bool(self.verdict));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_conjunctive() {
        let mut r = Report::new("x", serde_json::json!({"b": 1, "a": 2}));
        r.check("z", true, 1);
        r.check("y", false, "no");
        assert!(!r.verdict());
        let s = r.to_json();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"y\"").unwrap() < s.find("\"z\"").unwrap());
        assert!(s.contains("\"schema_version\": 1"));
    }
}
