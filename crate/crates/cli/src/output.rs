//! JSON and CSV emission with a reproducibility manifest.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// How a run can be reproduced and checked.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub version: String,
    pub seed: Option<u64>,
    pub timestamp: String,
    /// SHA-256 of the report with every `wall_time` removed.
    pub digest: String,
}

fn strip_wall_time(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time");
            map.values_mut().for_each(strip_wall_time);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}

/// Digest of the timing-free canonical JSON of `report`.
pub fn digest(report: &Value) -> String {
    let mut v = report.clone();
    strip_wall_time(&mut v);
    let bytes = serde_json::to_vec(&v).expect("JSON values always serialize");
    hex::encode(Sha256::digest(bytes))
}

/// Rounds every float to 12 significant digits.
pub fn round_reals(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if let Ok(r) = format!("{x:.11e}").parse::<f64>() {
                *v = json!(r);
            }
        }
        Value::Object(map) => map.values_mut().for_each(round_reals),
        Value::Array(items) => items.iter_mut().for_each(round_reals),
        _ => {}
    }
}

pub fn manifest(report: &Value, seed: Option<u64>) -> RunManifest {
    RunManifest {
        command_line: std::env::args().collect(),
        version: irrlab::VERSION.to_string(),
        seed,
        timestamp: chrono::Utc::now().to_rfc3339(),
        digest: digest(report),
    }
}

/// Writes `{"manifest": ..., "report": ...}` to standard output.
pub fn emit_json(report: Value, seed: Option<u64>) -> Result<(), Failure> {
    let out = json!({ "manifest": manifest(&report, seed), "report": report });
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &out).map_err(|e| Failure::io(e.into()))?;
    writeln!(stdout).map_err(Failure::io)
}

/// One CSV row per degree.
#[derive(Serialize)]
pub struct CsvRow {
    pub n: usize,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Writes the rows to standard output and the manifest to standard error.
pub fn emit_csv(rows: &[CsvRow], report: &Value, seed: Option<u64>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::io(e.into()))?;
    }
    w.flush().map_err(Failure::io)?;
    let m = manifest(report, seed);
    eprintln!("digest {}", m.digest);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_wall_time() {
        let a = json!({"x": 1, "wall_time": 0.5, "rows": [{"wall_time": 2.0, "y": 3}]});
        let b = json!({"x": 1, "wall_time": 9.0, "rows": [{"wall_time": 1.0, "y": 3}]});
        let c = json!({"x": 2, "wall_time": 0.5, "rows": [{"wall_time": 2.0, "y": 3}]});
        assert_eq!(digest(&a), digest(&b));
        assert_ne!(digest(&a), digest(&c));
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        let mut v = json!({"a": 0.566_218_518_346_123_4, "b": [1.0 / 3.0], "c": 7});
        round_reals(&mut v);
        assert_eq!(v["a"], json!(0.566_218_518_346));
        assert_eq!(v["b"][0], json!(0.333_333_333_333));
        assert_eq!(v["c"], json!(7));
    }
}
