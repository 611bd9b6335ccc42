use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_SCHEMA: &str = "overlap-ecc/manifest/v1";

#[derive(Debug, Serialize)]
pub struct OutputChecksum {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command and check that it reproduced.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub outputs: Vec<OutputChecksum>,
}

impl RunManifest {
    pub fn new(command: String, arguments: Vec<String>, seed: Option<u64>) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA,
            command,
            arguments,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, path: String, bytes: &[u8]) {
        self.outputs.push(OutputChecksum {
            path,
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// `report.csv` -> `report.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
