use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// The statement being verified.
    pub anchor: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>, anchor: &str) -> Check {
        Check { name: name.into(), pass, detail: detail.into(), anchor: anchor.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    pub output: Value,
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Sorted keys, two-space indentation.
    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# {}\n\ninputs: `{}`\n\n| check | pass | detail | anchor |\n|---|---|---|---|\n", self.command, self.inputs_digest);
        for c in &self.checks {
            s.push_str(&format!("| {} | {} | {} | {} |\n", c.name, if c.pass { "yes" } else { "no" }, c.detail.replace('|', "\\|"), c.anchor.replace('|', "\\|")));
        }
        if let Some(rows) = self.output.get("rows").and_then(Value::as_array) {
            if let Some(first) = rows.first().and_then(Value::as_object) {
                let keys: Vec<&String> = first.keys().collect();
                s.push_str(&format!("\n| {} |\n|{}\n", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(" | "), "---|".repeat(keys.len())));
                for r in rows {
                    let cells: Vec<String> = keys.iter().map(|k| plain(&r[k.as_str()])).collect();
                    s.push_str(&format!("| {} |\n", cells.join(" | ")));
                }
            }
        }
        if let Some(t) = self.timing_ms {
            s.push_str(&format!("\ntiming: {t} ms\n"));
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// SHA-256 over the canonical form of the inputs.
pub fn digest(inputs: &Value) -> String {
    hex::encode(Sha256::digest(canonical_json(inputs).as_bytes()))
}
