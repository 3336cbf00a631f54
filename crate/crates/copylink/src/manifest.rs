//! Record of one CLI run: inputs hash, seed, timing and outputs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::hex;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub tool_version: String,
    pub master_seed: u64,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputFile>,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, config_hash: String, master_seed: u64) -> Self {
        Self {
            command: command.into(),
            config_hash,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            master_seed,
            started: now(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    /// Register a written file.
    pub fn add_output(&mut self, path: &Path) -> CliResult<()> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(OutputFile { path: path.to_path_buf(), sha256: hex(&Sha256::digest(&bytes)) });
        Ok(())
    }

    /// Stamp the end time and write `<dir>/<command>.manifest.json`.
    pub fn finish(mut self, dir: &Path) -> CliResult<PathBuf> {
        self.finished = now();
        let path = dir.join(format!("{}.manifest.json", self.command));
        let mut text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        text.push('\n');
        crate::io::write_text(&path, &text)?;
        Ok(path)
    }
}

/// Hex SHA-256 of a string.
pub fn hash_str(s: &str) -> String {
    hex(&Sha256::digest(s.as_bytes()))
}
