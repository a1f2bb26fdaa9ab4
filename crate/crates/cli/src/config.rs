//! Flat JSON configuration files and the flag > file > default precedence.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: Map<String, Value>,
    taken: BTreeSet<String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let Value::Object(values) = serde_json::from_str(text)? else {
            bail!("config must be a JSON object");
        };
        for (k, v) in &values {
            let nested = match v {
                Value::Object(_) => true,
                Value::Array(xs) => xs.iter().any(|x| x.is_object() || x.is_array()),
                _ => false,
            };
            if nested {
                bail!("config key `{k}` is nested; only scalars and flat arrays are allowed");
            }
        }
        Ok(Self {
            values,
            taken: BTreeSet::new(),
        })
    }

    /// The flag value if given, else the file value, else `default`.
    pub fn pick<T: DeserializeOwned>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        self.taken.insert(key.to_owned());
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(v) => serde_json::from_value(v.clone()).with_context(|| format!("config key `{key}`")),
            None => Ok(default),
        }
    }

    /// Fails on keys no parameter asked for.
    pub fn finish(&self) -> Result<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !self.taken.contains(*k))
            .map(String::as_str)
            .collect();
        if !unknown.is_empty() {
            bail!("unknown config key(s): {}", unknown.join(", "));
        }
        Ok(())
    }
}

/// SHA-256 of the canonical JSON of a resolved configuration.
pub fn config_hash(command: &str, resolved: &impl Serialize) -> Result<String> {
    let doc = serde_json::to_string(&(command, resolved))?;
    Ok(hex::encode(Sha256::digest(doc.as_bytes())))
}
