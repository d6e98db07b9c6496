use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub a: String,
    pub b: String,
    pub seed: u64,
    pub eps_spacing: f64,
    pub residual: f64,
    pub n_degrees: usize,
    pub n_intersections: usize,
    pub samples: usize,
    pub grid: usize,
    pub window: (f64, f64),
    pub arclength: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a: "-2".into(),
            b: "1".into(),
            seed: 20_260_101,
            eps_spacing: 1e-3,
            residual: 1e-12,
            n_degrees: 6,
            n_intersections: 2,
            samples: 1000,
            grid: 3,
            window: (0.25, 0.75),
            arclength: 50.0,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_hash() {
        let c = RunConfig { a: "-1/4".into(), seed: 7, ..RunConfig::default() };
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_ne!(c.hash(), RunConfig::default().hash());
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"b": "-1"}"#).unwrap();
        assert_eq!(c.b, "-1");
        assert_eq!(c.a, "-2");
    }
}
