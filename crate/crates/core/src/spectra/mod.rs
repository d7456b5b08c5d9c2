//! Named experiments with reproducible JSON reports.
//!
//! A report has a checksummed section (config echo, checks, library version)
//! serialized with sorted keys, its SHA-256, and the wall time outside the
//! checksum, so two runs with the same config produce the same digest.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

mod experiments;

pub use experiments::{run_checks, EXPERIMENTS};

pub const SCHEMA_VERSION: u32 = 1;

/// Parameters of a run. Only `name` is required; unset fields take the
/// experiment's defaults and are echoed back resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn new(name: &str) -> Self {
        ExperimentConfig { name: name.into(), ..Default::default() }
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::SchemaViolation(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl Check {
    pub fn compare(name: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check { name: name.into(), matched: expected == computed, expected, computed }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub wall_ms: f64,
    pub version: String,
}

impl ExperimentReport {
    pub fn all_match(&self) -> bool {
        self.checks.iter().all(|c| c.matched)
    }

    pub fn checksummed(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "experiment": self.config.name,
            "config": self.config,
            "checks": self.checks,
            "all_match": self.all_match(),
            "version": self.version,
        })
    }

    /// Digest of [`Self::checksummed`].
    pub fn sha256(&self) -> String {
        digest(&self.checksummed())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "report": self.checksummed(),
            "sha256": self.sha256(),
            "wall_ms": self.wall_ms,
        })
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "experiment {} (seed {})", self.config.name, self.config.seed)?;
        for c in &self.checks {
            let flag = if c.matched { "ok " } else { "MISMATCH" };
            writeln!(f, "  [{flag}] {}: expected {}, computed {}", c.name, c.expected, c.computed)?;
        }
        write!(f, "{} of {} checks match", self.checks.iter().filter(|c| c.matched).count(), self.checks.len())
    }
}

/// Hex SHA-256 of the compact serialization. `serde_json` keeps object keys
/// sorted, so equal values give equal digests.
pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut config = config.clone();
    let checks = run_checks(&mut config)?;
    Ok(ExperimentReport {
        config,
        checks,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    std::fs::write(path, text + "\n").map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}
