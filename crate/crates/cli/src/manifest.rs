use std::time::{SystemTime, UNIX_EPOCH};

use aomm_core::presets::EtaRange;
use aomm_core::spectra::GridSpec;
use aomm_core::{ConfigFile, SystemConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to regenerate a run's data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; not part of the reproducibility hash.
    pub timestamp_unix_s: u64,
    pub preset: Option<String>,
    /// Exact (rad/s) snapshot used for the run.
    pub config: SystemConfig,
    /// The same values in the config-file schema.
    pub config_over_2pi_hz: ConfigFile,
    pub grid: GridSpec,
    pub eta: Option<EtaRange>,
    pub prominence: Option<f64>,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    pub outputs: Vec<OutputFile>,
    /// SHA-256 over the manifest with this field and the timestamp removed.
    pub reproducibility_hash: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn compute_hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("manifest serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timestamp_unix_s");
            obj.remove("reproducibility_hash");
        }
        // serde_json maps are key-sorted, so this text is canonical
        sha256_hex(value.to_string().as_bytes())
    }

    pub fn seal(mut self) -> Self {
        self.reproducibility_hash = self.compute_hash();
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
