use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "xfervocab";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to rerun a command and check its artifacts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub format: String,
    /// Command line after config expansion, without manifest flags.
    pub argv: Vec<String>,
    pub cwd: PathBuf,
    pub seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub stdout_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest {
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
    })
}

pub fn digest_all(paths: &[PathBuf]) -> Result<Vec<FileDigest>> {
    paths.iter().map(|p| digest_file(p)).collect()
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing manifest {}", path.display()))
    }
}

/// Default manifest location next to the first output.
pub fn default_path(first_output: &Path) -> PathBuf {
    let mut name = first_output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Lines describing each digest that differs between two runs.
pub fn diff(what: &str, recorded: &[FileDigest], now: &[FileDigest]) -> Vec<String> {
    let mut out = Vec::new();
    if recorded.len() != now.len() {
        out.push(format!("{what}: recorded {} files, got {}", recorded.len(), now.len()));
    }
    for (r, n) in recorded.iter().zip(now) {
        if r != n {
            out.push(format!(
                "{what} {}: recorded {} got {}",
                r.path.display(),
                r.sha256,
                n.sha256
            ));
        }
    }
    out
}
