//! Plain-text rendering of the JSON payloads.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("free_rank") && m.contains_key("torsion") => invariants(v),
        other => other.to_string(),
    }
}

fn invariants(v: &Value) -> String {
    let free = v["free_rank"].as_u64().unwrap_or(0);
    let mut parts = Vec::new();
    if free > 0 {
        parts.push(if free == 1 { "Z".to_string() } else { format!("Z^{free}") });
    }
    for t in v["torsion"].as_array().into_iter().flatten() {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn rows(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !(m.contains_key("free_rank") && m.contains_key("torsion")) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                rows(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                rows(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

pub fn render(v: &Value) -> String {
    let mut out = Vec::new();
    rows("", v, &mut out);
    let width = out.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, x) in out {
        s.push_str(&format!("{k:width$}  {x}\n"));
    }
    s
}
