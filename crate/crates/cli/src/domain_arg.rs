//! Resolution of `--domain` and `--param` into a domain spec.

use std::path::Path;

use heatimages_core::DomainSpec;
use serde_json::{json, Map, Value};

/// Named shortcuts with their JSON specs.
pub const SHORTCUTS: [(&str, &str); 9] = [
    ("interval-1", r#"{"kind":"Interval","params":{"L":1}}"#),
    ("triangle-333", r#"{"kind":"Triangle","params":{"p":3,"q":3,"r":3,"a":1}}"#),
    ("triangle-244", r#"{"kind":"Triangle","params":{"p":2,"q":4,"r":4,"a":1}}"#),
    ("triangle-236", r#"{"kind":"Triangle","params":{"p":2,"q":3,"r":6,"a":1}}"#),
    ("rectangle-ab", r#"{"kind":"Rectangle","params":{"a":1,"b":2}}"#),
    ("prism-223", r#"{"kind":"TriangularPrism","params":{"p":2,"q":2,"r":3,"a":1,"c":1}}"#),
    ("prism-244", r#"{"kind":"TriangularPrism","params":{"p":2,"q":4,"r":4,"a":1,"c":1}}"#),
    ("prism-236", r#"{"kind":"TriangularPrism","params":{"p":2,"q":3,"r":6,"a":1,"c":1}}"#),
    ("box-abc", r#"{"kind":"Box","params":{"a":1,"b":1,"c":2}}"#),
];

fn shortcut(name: &str) -> Option<&'static str> {
    SHORTCUTS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn parse_value(key: &str, raw: &str) -> Result<Value, String> {
    if key == "edges" {
        let edges = raw
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad edge {s:?}: {e}")))
            .collect::<Result<Vec<f64>, String>>()?;
        return Ok(json!(edges));
    }
    // Integers stay integers so that angle indices deserialize.
    if let Ok(i) = raw.parse::<i64>() {
        return Ok(json!(i));
    }
    raw.parse::<f64>()
        .map(|x| json!(x))
        .map_err(|_| format!("parameter {key} needs a number, got {raw:?}"))
}

/// Builds the spec from an inline JSON document, a shortcut name or a file
/// path, then applies `key=value` overrides.
pub fn resolve(domain: &str, params: &[String]) -> Result<DomainSpec, String> {
    let text = if domain.trim_start().starts_with('{') {
        domain.to_string()
    } else if let Some(s) = shortcut(domain) {
        s.to_string()
    } else if Path::new(domain).is_file() {
        std::fs::read_to_string(domain).map_err(|e| format!("cannot read {domain}: {e}"))?
    } else {
        let names: Vec<&str> = SHORTCUTS.iter().map(|(n, _)| *n).collect();
        return Err(format!(
            "--domain {domain:?} is neither JSON, a readable file nor one of {}",
            names.join(", ")
        ));
    };
    let mut value: Value = serde_json::from_str(&text).map_err(|e| format!("malformed domain JSON: {e}"))?;
    if !params.is_empty() {
        let obj = value
            .as_object_mut()
            .ok_or_else(|| "domain JSON must be an object".to_string())?;
        let bag = obj
            .entry("params")
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .ok_or_else(|| "\"params\" must be an object".to_string())?;
        for p in params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| format!("--param expects key=value, got {p:?}"))?;
            bag.insert(k.trim().to_string(), parse_value(k.trim(), v.trim())?);
        }
    }
    serde_json::from_value(value).map_err(|e| format!("invalid domain spec: {e}"))
}
