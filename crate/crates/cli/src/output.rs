use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use expsum::expsum::ApproxConfig;
use rug::Float;
use serde::Serialize;

use crate::Failure;

/// Provenance block embedded in every file the tool writes.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub command: String,
    pub target: String,
    pub target_params: Vec<(String, String)>,
    pub config: Option<ApproxConfig>,
    pub digits: u32,
    pub input: Option<String>,
    pub output: Option<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, target: &str, params: &[(String, String)], digits: u32) -> Self {
        RunManifest {
            command: command.to_string(),
            target: target.to_string(),
            target_params: params.to_vec(),
            config: None,
            digits,
            input: None,
            output: None,
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest is plain data")
    }
}

pub fn path_string(p: &Path) -> String {
    p.display().to_string()
}

/// Decimal with 20 significant digits.
pub fn sig20(x: &Float) -> String {
    if x.is_zero() {
        "0".to_string()
    } else {
        x.to_string_radix(10, Some(20))
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Numerical(format!("cannot write {}: {e}", path.display())))
}

/// `lo:hi:step`, inclusive of `hi` up to rounding.
pub fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Usage(format!("range {s:?}: {why}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("expected lo:hi:step or a single value"))?;
    let (lo, hi, step) = match parts[..] {
        [v] => (v, v, 1.0),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(bad("expected lo:hi:step or a single value")),
    };
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if lo > hi {
        return Err(bad("empty range, lo > hi"));
    }
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    // Round away the drift of lo + k·step so that 0.1 steps print cleanly.
    Ok((0..count)
        .map(|k| {
            let v = lo + k as f64 * step;
            format!("{v:.12e}").parse().unwrap_or(v)
        })
        .collect())
}
