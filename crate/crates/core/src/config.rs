//! Config files in either JSON or a small `key = value` format.
//!
//! In the `key = value` format, `#` starts a comment, values that parse as
//! JSON (numbers, booleans, arrays, quoted strings) keep that type, a bare
//! comma-separated list becomes an array, and anything else is a string.
//! A `[name]` line opens a section whose keys are collected into a nested
//! object under `name`.

use std::path::Path;

use serde::de::{DeserializeOwned, Deserializer};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Parses config text into a JSON object.
pub fn parse_value(text: &str) -> Result<Value> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        return if v.is_object() { Ok(v) } else { Err(Error::Config("top level must be an object".into())) };
    }
    let mut root = Map::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if name.is_empty() || root.contains_key(&name) {
                return Err(Error::Config(format!("line {}: bad or repeated section [{name}]", idx + 1)));
            }
            root.insert(name.clone(), Value::Object(Map::new()));
            section = Some(name);
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", idx + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", idx + 1)));
        }
        let target = match &section {
            Some(s) => root.get_mut(s).and_then(Value::as_object_mut).expect("section object"),
            None => &mut root,
        };
        if target.insert(key.to_string(), parse_scalar(value.trim())).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", idx + 1)));
        }
    }
    Ok(Value::Object(root))
}

fn parse_scalar(text: &str) -> Value {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return v;
    }
    if text.contains(',') {
        return Value::Array(text.split(',').map(|part| parse_scalar(part.trim())).collect());
    }
    Value::String(text.to_string())
}

/// Accepts either a single value or a list where a list is expected, so
/// `estimators = mdl` works like `estimators = mdl, mpt-full`.
pub fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        Many(Vec<T>),
        One(T),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(x) => vec![x],
    })
}

/// Parses config text into `T`.
pub fn parse_config<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_value(parse_value(text)?).map_err(|e| Error::Config(e.to_string()))
}

/// Reads and parses a config file.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
