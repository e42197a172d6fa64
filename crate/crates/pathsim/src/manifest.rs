//! Run manifests: every artifact-producing command writes a JSON record
//! of the resolved configuration, master seed, and file paths next to
//! its output, so any file can be traced back to the run that made it.

use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Crate version that produced the artifact.
    pub artifact_version: String,
    /// UTC timestamp in RFC 3339 (seconds precision).
    pub created_utc: String,
    /// Subcommand that produced the outputs (e.g. "simulate").
    pub command: String,
    /// Master seed the run derived all randomness from.
    pub master_seed: u64,
    /// Fully resolved configuration (defaults merged with overrides).
    pub config: Config,
    /// Files the run read, if any.
    pub inputs: Vec<PathBuf>,
    /// Files the run wrote, excluding the manifest itself.
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, master_seed: u64, config: Config) -> RunManifest {
        RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            created_utc: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            command: command.to_string(),
            master_seed,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Manifest path for a given primary output: `out.csv` gets
    /// `out.manifest.json` alongside it.
    pub fn sibling_path(output: &Path) -> PathBuf {
        let stem = output
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("run");
        output.with_file_name(format!("{stem}.manifest.json"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<RunManifest> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn round_trips_through_json() {
        let mut m = RunManifest::new("simulate", 42, Config::default_config());
        m.outputs.push(PathBuf::from("dataset.csv"));
        let dir = tempdir().unwrap();
        let path = dir.path().join("dataset.manifest.json");
        m.write(&path).unwrap();
        let back = RunManifest::read(&path).unwrap();
        assert_eq!(back.master_seed, 42);
        assert_eq!(back.command, "simulate");
        assert_eq!(back.outputs, m.outputs);
        assert_eq!(back.config, m.config);
    }

    #[test]
    fn sibling_path_replaces_extension() {
        assert_eq!(
            RunManifest::sibling_path(Path::new("/tmp/out/dataset.csv")),
            PathBuf::from("/tmp/out/dataset.manifest.json")
        );
    }

    #[test]
    fn timestamp_is_rfc3339() {
        let m = RunManifest::new("report", 1, Config::default_config());
        assert!(chrono::DateTime::parse_from_rfc3339(&m.created_utc).is_ok());
    }
}
