//! Persisted run records.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// JSON schema for [`RunRecord`], shipped with the crate.
pub const RUN_RECORD_SCHEMA: &str = include_str!("../../data/run_record.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub command: String,
    pub args: Vec<String>,
    pub config: Value,
    pub output: Value,
    pub version: String,
}

impl RunRecord {
    pub fn new(command: &str, args: Vec<String>, config: Value, output: Value) -> Self {
        RunRecord {
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            command: command.to_string(),
            args,
            config,
            output,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("record serializes");
        std::fs::write(path, text + "\n")
    }

    pub fn read(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rec = RunRecord::new(
            "formula",
            vec!["--d".into(), "8".into()],
            serde_json::json!({"d": 8, "m": 10}),
            serde_json::json!({"f_delta": 84}),
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        rec.write(&path).unwrap();
        assert_eq!(RunRecord::read(&path).unwrap(), rec);
    }

    #[test]
    fn schema_is_valid_json() {
        let v: Value = serde_json::from_str(RUN_RECORD_SCHEMA).unwrap();
        assert_eq!(v["type"], "object");
    }
}
