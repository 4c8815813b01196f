//! Report assembly and serialization.
//!
//! A report is a JSON object with the keys `schema_version`, `config`,
//! `records`, `summary` and `timing_ms`. Floats carry 17 significant digits
//! and non-finite values serialize as `null`. The CSV form is a flat
//! projection of `records`: nested keys are joined with dots.

use std::io::Write;
use std::time::Instant;

use salemfield::spectral::Check;
use serde_json::{json, Map, Value};

use crate::error::CliResult;

pub const SCHEMA_VERSION: &str = "1";

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(format!("{x:.16e}").parse().expect("formatted float is a JSON number"))
}

pub fn check(c: &Check) -> Value {
    json!({
        "name": c.name,
        "observed": float(c.observed),
        "limit": float(c.limit),
        "margin": float(c.margin),
        "pass": c.pass,
    })
}

/// A check for an exact integer identity.
pub fn exact(name: &str, observed: u64, expected: u64) -> Value {
    json!({
        "name": name,
        "observed": observed,
        "limit": expected,
        "margin": expected as i128 - observed as i128,
        "pass": observed == expected,
    })
}

pub struct Report {
    config: Map<String, Value>,
    records: Vec<Value>,
    summary: Map<String, Value>,
    timing: Option<Map<String, Value>>,
}

impl Report {
    pub fn new(config: Map<String, Value>, timing: bool) -> Self {
        Self { config, records: Vec::new(), summary: Map::new(), timing: timing.then(Map::new) }
    }

    pub fn push(&mut self, record: Value) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[Value] {
        &self.records
    }

    pub fn summarize(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    /// Runs `f` as a named stage, recording wall-clock time when enabled.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if let Some(t) = &mut self.timing {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let prev = t.get(name).and_then(Value::as_f64).unwrap_or(0.0);
            t.insert(name.to_string(), float(prev + ms));
        }
        out
    }

    /// Names of every failed check, in record order.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.records {
            collect_failures(r, &mut out);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let failures = self.failures();
        let mut summary = self.summary.clone();
        summary.insert("checks_failed".into(), json!(failures.len()));
        summary.insert("failed_checks".into(), json!(failures));
        summary.insert("all_pass".into(), json!(failures.is_empty()));
        json!({
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "records": self.records,
            "summary": summary,
            "timing_ms": self.timing.clone().unwrap_or_default(),
        })
    }

    pub fn write_json(&self, out: &mut dyn Write) -> CliResult<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let rows: Vec<Vec<(String, String)>> = self
            .records
            .iter()
            .map(|r| {
                let mut row = Vec::new();
                flatten("", r, &mut row);
                row
            })
            .collect();
        let mut columns: Vec<String> = Vec::new();
        for (k, _) in rows.iter().flatten() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
        let mut w = csv::Writer::from_writer(out);
        if !columns.is_empty() {
            w.write_record(&columns)?;
        }
        for row in &rows {
            w.write_record(columns.iter().map(|c| {
                row.iter().find(|(k, _)| k == c).map_or("", |(_, v)| v.as_str())
            }))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn collect_failures(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            if m.get("pass") == Some(&Value::Bool(false)) {
                let name = m.get("name").and_then(Value::as_str).unwrap_or("unnamed");
                let target = m.get("target").and_then(Value::as_str);
                out.push(target.map_or(name.to_string(), |t| format!("{t}: {name}")));
            }
            for (k, child) in m {
                if k == "checks" {
                    let target = m.get("target").and_then(Value::as_str);
                    for c in child.as_array().into_iter().flatten() {
                        if c.get("pass") == Some(&Value::Bool(false)) {
                            let name = c.get("name").and_then(Value::as_str).unwrap_or("unnamed");
                            out.push(target.map_or(name.to_string(), |t| format!("{t}: {name}")));
                        }
                    }
                } else {
                    collect_failures(child, out);
                }
            }
        }
        Value::Array(items) => items.iter().for_each(|c| collect_failures(c, out)),
        _ => {}
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                // checks are keyed by name so columns line up across rows
                let label = child.get("name").and_then(Value::as_str).map_or(i.to_string(), str::to_string);
                match child {
                    Value::Object(m) if m.contains_key("name") => {
                        for (k, c) in m.iter().filter(|(k, _)| *k != "name") {
                            flatten(&format!("{}.{k}", key(&label)), c, out);
                        }
                    }
                    _ => flatten(&key(&label), child, out),
                }
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
