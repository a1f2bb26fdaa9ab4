//! CSV tables with a provenance comment header, and the JSON check summary.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::config_hash;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip text for `x`, switching to exponent form for very
/// small or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_owned()
    } else if !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Report {
    command: &'static str,
    seed: u64,
    config: Value,
    hash: String,
    columns: Vec<&'static str>,
    body: String,
    rows: usize,
    checks: Vec<Check>,
    metrics: Map<String, Value>,
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    config_sha256: &'a str,
    rows: usize,
    passed: bool,
    checks: &'a [Check],
    metrics: &'a Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, config: &impl Serialize, columns: &[&'static str]) -> Result<Self> {
        Ok(Self {
            command,
            seed,
            config: serde_json::to_value(config)?,
            hash: config_hash(command, config)?,
            columns: columns.to_vec(),
            body: String::new(),
            rows: 0,
            checks: Vec::new(),
            metrics: Map::new(),
        })
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.body.push_str(&cells.join(","));
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn metric(&mut self, name: &str, value: impl Into<Value>) {
        self.metrics.insert(name.to_owned(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn csv(&self) -> String {
        format!(
            "# mallows {} {}\n# seed={} config_sha256={}\n# config={}\n{}\n{}",
            self.command,
            VERSION,
            self.seed,
            self.hash,
            self.config,
            self.columns.join(","),
            self.body
        )
    }

    fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&Summary {
            command: self.command,
            version: VERSION,
            seed: self.seed,
            config_sha256: &self.hash,
            rows: self.rows,
            passed: self.passed(),
            checks: &self.checks,
            metrics: &self.metrics,
        })?)
    }

    /// Writes the table and summary; returns whether every check passed.
    pub fn emit(&self, out: Option<&Path>, summary: Option<&Path>) -> Result<bool> {
        let csv = self.csv();
        match out {
            Some(p) => std::fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?,
            None => std::io::stdout().lock().write_all(csv.as_bytes())?,
        }
        let json = self.summary_json()?;
        eprintln!("{json}");
        if let Some(p) = summary {
            std::fs::write(p, format!("{json}\n")).with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(self.passed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        for x in [0.0, 1.0, -2.5, 0.1, 1e-300, 6.02e23, 1.0 / 3.0, -7.3e-9] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(1e-300), "1e-300");
    }

    #[test]
    fn header_and_rows() {
        let mut r = Report::new("demo", 3, &serde_json::json!({"k": 1}), &["a", "b"]).unwrap();
        r.row(&["1".into(), "2".into()]);
        let csv = r.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# mallows demo"));
        assert!(lines[1].starts_with("# seed=3 config_sha256="));
        assert_eq!(&lines[3..], ["a,b", "1,2"]);
        assert!(r.passed());
        r.check("x", false, "");
        assert!(!r.passed());
    }
}
