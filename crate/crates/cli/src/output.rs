use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Failure;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Failure::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| Failure::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: serde_json::Value,
    pub version: String,
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<OutputFile>,
    pub timings_ms: BTreeMap<String, f64>,
}

/// Collects outputs and timings for one command run, then writes `manifest.json`.
pub struct Run {
    out_dir: PathBuf,
    manifest: RunManifest,
    last: Instant,
}

impl Run {
    pub fn new(command: &str, arguments: impl Serialize, out_dir: &Path) -> Self {
        Self {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                command: command.into(),
                arguments: serde_json::to_value(arguments).unwrap_or(serde_json::Value::Null),
                version: gcnn_vc::VERSION.into(),
                input_hashes: BTreeMap::new(),
                outputs: Vec::new(),
                timings_ms: BTreeMap::new(),
            },
            last: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.manifest.input_hashes.insert(path.display().to_string(), sha256_hex(bytes));
    }

    /// Records the time since the previous lap under `name`.
    pub fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.manifest.timings_ms.insert(name.into(), (now - self.last).as_secs_f64() * 1e3);
        self.last = now;
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
        let path = self.out_dir.join(name);
        write_atomic(&path, bytes)?;
        self.manifest.outputs.push(OutputFile { path: path.display().to_string(), sha256: sha256_hex(bytes) });
        Ok(path)
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        self.lap("write");
        let mut text = serde_json::to_string_pretty(&self.manifest).map_err(|e| Failure::internal(e.to_string()))?;
        text.push('\n');
        write_atomic(&self.out_dir.join("manifest.json"), text.as_bytes())
    }
}
