//! Output directories: JSON and CSV artifacts stamped with the config hash,
//! the seed log and the run manifest.

use crate::error::CliError;
use pclocal::rng;
use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Named seeds derived from the master seed, in the order they were drawn.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SeedLog {
    pub master: u64,
    pub derived: Vec<SeedEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedEntry {
    pub name: String,
    pub seed: u64,
}

impl SeedLog {
    pub fn new(master: u64) -> Self {
        SeedLog {
            master,
            derived: Vec::new(),
        }
    }

    /// Seed for sub-task `name`, a hash of `(master, name)`.
    pub fn derive(&mut self, name: &str) -> u64 {
        let seed = rng::derive(self.master, rng::label(name));
        self.record(name, seed)
    }

    /// Records a seed supplied from outside the derivation scheme.
    pub fn record(&mut self, name: &str, seed: u64) -> u64 {
        if !self.derived.iter().any(|e| e.name == name) {
            self.derived.push(SeedEntry {
                name: name.to_string(),
                seed,
            });
        }
        seed
    }
}

/// Writes artifacts into one directory, remembering their names.
#[derive(Debug)]
pub struct ArtifactDir {
    dir: PathBuf,
    config_hash: String,
    written: Vec<String>,
}

impl ArtifactDir {
    pub fn create(dir: &Path, config_hash: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(ArtifactDir {
            dir: dir.to_path_buf(),
            config_hash: config_hash.to_string(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Pretty JSON with a top-level `config_hash` field.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut v = serde_json::to_value(value)?;
        match &mut v {
            Value::Object(map) => {
                map.insert("config_hash".into(), Value::String(self.config_hash.clone()));
            }
            other => {
                let inner = other.take();
                v = serde_json::json!({ "config_hash": self.config_hash, "value": inner });
            }
        }
        let mut text = serde_json::to_string_pretty(&v)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// CSV whose first line is `# config_hash=<hash>`, followed by any extra
    /// comment lines, the header and the rows.
    pub fn csv(&mut self, name: &str, comments: &[String], header: &str, rows: &[String]) -> Result<(), CliError> {
        let mut buf = Vec::new();
        for c in self.comments(comments) {
            writeln!(buf, "# {c}")?;
        }
        writeln!(buf, "{header}")?;
        for r in rows {
            writeln!(buf, "{r}")?;
        }
        self.write(name, &buf)
    }

    /// The comment lines every CSV starts with.
    pub fn comments(&self, extra: &[String]) -> Vec<String> {
        let mut out = vec![format!("config_hash={}", self.config_hash)];
        out.extend(extra.iter().cloned());
        out
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }
}
