//! Result records, in text or as JSON lines.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crossprod::scalar::fmt_real;

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub operation: String,
    pub inputs_digest: String,
    pub outcome: Value,
    pub witnesses: Vec<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// First 16 hex digits of the SHA-256 of the canonical inputs.
pub fn digest(parts: &[(&str, String)]) -> String {
    let mut h = Sha256::new();
    for (k, v) in parts {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A float rounded to 12 significant digits.
pub fn num(x: f64) -> Value {
    match fmt_real(x).parse::<f64>() {
        Ok(v) if v.is_finite() => json!(v),
        _ => Value::String(fmt_real(x)),
    }
}

pub fn obj<const N: usize>(fields: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in fields {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", text_value(v))).collect::<Vec<_>>().join(" "),
        Value::Array(a) => format!("[{}]", a.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

impl Record {
    pub fn write(&self, format: Format, out: &mut String) {
        match format {
            Format::Json => {
                let mut m = Map::new();
                m.insert("operation".into(), Value::String(self.operation.clone()));
                m.insert("inputs_digest".into(), Value::String(self.inputs_digest.clone()));
                m.insert("outcome".into(), self.outcome.clone());
                m.insert("witnesses".into(), Value::Array(self.witnesses.clone()));
                out.push_str(&Value::Object(m).to_string());
                out.push('\n');
            }
            Format::Text => {
                out.push_str(&format!("{}: {}\n", self.operation, text_value(&self.outcome)));
                for w in &self.witnesses {
                    out.push_str(&format!("  {}\n", text_value(w)));
                }
            }
        }
    }
}
