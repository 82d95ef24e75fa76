//! JSON run manifest: written before a command computes anything and
//! finalized when it exits, whatever the outcome.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Canonical text of the configuration.
    pub config: String,
    pub config_sha256: String,
    pub seed: u64,
    /// Caps parallelism only; outputs do not depend on it.
    pub workers: usize,
    pub strict: bool,
    pub started_unix: f64,
    pub finished_unix: Option<f64>,
    pub status: String,
    pub exit_code: Option<i32>,
    pub error: Option<String>,
    pub outputs: Vec<OutputEntry>,
    pub constants: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

impl RunManifest {
    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Read { path: path.to_path_buf(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Live manifest of one run in `dir`.
pub struct RunRecord {
    pub manifest: RunManifest,
    dir: PathBuf,
}

impl RunRecord {
    pub fn start(dir: &Path, command: &str, config: String, seed: u64, workers: usize, strict: bool) -> LabResult<Self> {
        std::fs::create_dir_all(dir)?;
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_sha256: sha256_hex(config.as_bytes()),
            config,
            seed,
            workers,
            strict,
            started_unix: now(),
            finished_unix: None,
            status: "running".to_string(),
            exit_code: None,
            error: None,
            outputs: Vec::new(),
            constants: BTreeMap::new(),
            notes: BTreeMap::new(),
            warnings: Vec::new(),
        };
        let rec = RunRecord { manifest, dir: dir.to_path_buf() };
        rec.write()?;
        Ok(rec)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.manifest.constants.insert(name.to_string(), value);
    }

    pub fn note(&mut self, name: &str, value: impl Into<String>) {
        self.manifest.notes.insert(name.to_string(), value.into());
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.manifest.warnings.push(w.into());
    }

    /// Adds a finished output file (path relative to the run directory).
    pub fn output(&mut self, path: &Path) -> LabResult<()> {
        let bytes = std::fs::read(path)?;
        let rel = path.strip_prefix(&self.dir).unwrap_or(path);
        self.manifest.outputs.push(OutputEntry { path: rel.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(())
    }

    fn write(&self) -> LabResult<()> {
        let text = serde_json::to_string_pretty(&self.manifest)?;
        std::fs::write(self.dir.join(MANIFEST_NAME), text + "\n")?;
        Ok(())
    }

    /// Records the outcome and writes the manifest a final time.
    pub fn finish(mut self, outcome: &LabResult<()>) -> LabResult<()> {
        self.manifest.finished_unix = Some(now());
        match outcome {
            Ok(()) => {
                self.manifest.status = "ok".to_string();
                self.manifest.exit_code = Some(0);
            }
            Err(e) => {
                self.manifest.status = e.status().to_string();
                self.manifest.exit_code = Some(e.exit_code());
                self.manifest.error = Some(e.to_string());
            }
        }
        self.write()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn written_at_start_and_finalized() {
        let dir = tempfile::tempdir().unwrap();
        let rec = RunRecord::start(dir.path(), "profile", "[a]\nb = 1\n".into(), 7, 1, false).unwrap();
        let early = RunManifest::load(&dir.path().join(MANIFEST_NAME)).unwrap();
        assert_eq!(early.status, "running");
        assert_eq!(early.seed, 7);
        rec.finish(&Err(LabError::Checks(vec!["x".into()]))).unwrap();
        let done = RunManifest::load(&dir.path().join(MANIFEST_NAME)).unwrap();
        assert_eq!(done.status, "check-failed");
        assert_eq!(done.exit_code, Some(1));
        assert!(done.finished_unix.is_some());
    }
}
