//! Reproducibility manifest and its verification.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{load_config, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{write_bytes, TOOL_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// Relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_hash: String,
    /// Config file used, if any; `verify` re-hashes it.
    pub config_path: Option<PathBuf>,
    pub seed: u64,
    pub shots: u64,
    /// `--seed`/`--shots` given on the command line; `verify` reapplies them.
    pub overrides: Overrides,
    pub command: String,
    /// Unix seconds.
    pub created_at: u64,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(s) = self.seed {
            cfg.oracle.seed = s;
        }
        if let Some(s) = self.shots {
            cfg.oracle.shots = s;
        }
    }
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(cfg: &RunConfig, config_path: Option<&Path>, overrides: Overrides, command: &str) -> Self {
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            tool_version: TOOL_VERSION.into(),
            config_hash: cfg.hash(),
            config_path: config_path.map(|p| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())),
            seed: cfg.oracle.seed,
            shots: cfg.oracle.shots,
            overrides,
            command: command.into(),
            created_at,
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, dir: &Path, file: &Path) -> CliResult<()> {
        let rel = file.strip_prefix(dir).unwrap_or(file);
        self.outputs.push(OutputEntry { path: rel.to_string_lossy().into_owned(), sha256: sha256_file(file)? });
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        let path = dir.join("manifest.json");
        write_bytes(&path, text.as_bytes())?;
        Ok(path)
    }
}

pub fn read_manifest(path: &Path) -> CliResult<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: not a run manifest: {e}", path.display())))
}

/// Rechecks output checksums and the config hash; every problem is listed.
///
/// `config` overrides the path recorded in the manifest.
pub fn verify(manifest_path: &Path, config: Option<&Path>) -> CliResult<Vec<String>> {
    let m = read_manifest(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut problems = Vec::new();
    let mut checked = Vec::new();
    for o in &m.outputs {
        let p = dir.join(&o.path);
        if !p.exists() {
            problems.push(format!("missing output file {}", p.display()));
            continue;
        }
        let h = sha256_file(&p)?;
        if h != o.sha256 {
            problems.push(format!("checksum mismatch for {}", p.display()));
        } else {
            checked.push(format!("ok {}", o.path));
        }
    }
    let cfg_path = config.map(Path::to_path_buf).or(m.config_path.clone());
    let mut cfg = match &cfg_path {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    m.overrides.apply(&mut cfg);
    let h = cfg.hash();
    if h != m.config_hash {
        let which = cfg_path.map_or("default config".into(), |p| p.display().to_string());
        problems.push(format!("config hash mismatch for {which}: manifest {}, now {h}", m.config_hash));
    } else {
        checked.push("ok config hash".into());
    }
    if problems.is_empty() {
        Ok(checked)
    } else {
        Err(CliError::Verify(problems.join("; ")))
    }
}
