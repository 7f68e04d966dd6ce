//! Command reports: JSON for machines, an aligned table for people.
//!
//! Keys keep insertion order, so two runs on the same input print the same bytes.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub results: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    /// Left side minus right side (Chern basis where it applies), failing verdicts only.
    pub residuals: Map<String, Value>,
    pub all_hold: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            results: Map::new(),
            verdicts: Map::new(),
            residuals: Map::new(),
            all_hold: true,
        }
    }

    pub fn result(&mut self, name: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(name.into(), value);
    }

    pub fn verdict(&mut self, name: &str, holds: bool, residual: Option<String>) {
        self.all_hold &= holds;
        self.verdicts.insert(name.into(), Value::Bool(holds));
        if let (false, Some(r)) = (holds, residual) {
            self.residuals.insert(name.into(), Value::String(r));
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_hold {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = self
            .results
            .iter()
            .map(|(n, v)| (n.clone(), plain(v)))
            .collect();
        for (n, v) in &self.verdicts {
            let mut s = if v == &Value::Bool(true) { "holds".to_string() } else { "FAILS".to_string() };
            if let Some(r) = self.residuals.get(n) {
                s.push_str(&format!(" (residual {})", plain(r)));
            }
            rows.push((format!("verdict {}", n), s));
        }
        let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.command);
        for (n, v) in rows {
            out.push_str(&format!("  {:<width$}  {}\n", n, v, width = width));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
