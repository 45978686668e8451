//! Batch manifest: a single JSON document listing pairs and methods.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use panfuse::metrics::DEFAULT_CSA_PERCENTILE;
use panfuse::{FusionMethod, SensorPairMeta};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub pair_id: String,
    pub ms_path: PathBuf,
    pub pan_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms_sensor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pan_sensor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms_resolution_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pan_resolution_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectral_ranges: Vec<String>,
}

impl PairEntry {
    pub fn meta(&self) -> SensorPairMeta {
        SensorPairMeta {
            pair_id: self.pair_id.clone(),
            ms_sensor: self.ms_sensor.clone(),
            pan_sensor: self.pan_sensor.clone(),
            ms_resolution_m: self.ms_resolution_m,
            pan_resolution_m: self.pan_resolution_m,
            location: self.location.clone(),
            spectral_ranges: self.spectral_ranges.clone(),
        }
    }
}

fn default_percentile() -> f64 {
    DEFAULT_CSA_PERCENTILE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchManifest {
    pub pairs: Vec<PairEntry>,
    pub methods: Vec<String>,
    pub output_dir: PathBuf,
    #[serde(default = "default_percentile")]
    pub csa_percentile: f64,
}

/// A validated manifest with methods parsed and paths made absolute
/// relative to the manifest's directory.
#[derive(Debug, Clone)]
pub struct BatchPlan {
    pub pairs: Vec<PairEntry>,
    pub methods: Vec<FusionMethod>,
    pub output_dir: PathBuf,
    pub csa_percentile: f64,
}

impl BatchManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Checks the invariants and resolves relative paths against `base`.
    pub fn plan(self, path: &Path, base: &Path) -> Result<BatchPlan> {
        let bad = |message: String| CliError::Manifest {
            path: path.to_path_buf(),
            message,
        };
        if self.pairs.is_empty() {
            return Err(bad("no pairs".into()));
        }
        if self.methods.is_empty() {
            return Err(bad("no methods".into()));
        }
        if !(self.csa_percentile > 0.0 && self.csa_percentile < 100.0) {
            return Err(bad(format!(
                "csa_percentile must lie in (0, 100), got {}",
                self.csa_percentile
            )));
        }
        let mut seen = HashSet::new();
        for pair in &self.pairs {
            if pair.pair_id.is_empty() || pair.pair_id.contains(['/', '\\']) || pair.pair_id == ".." || pair.pair_id == "." {
                return Err(bad(format!("invalid pair_id {:?}", pair.pair_id)));
            }
            if !seen.insert(pair.pair_id.as_str()) {
                return Err(bad(format!("duplicate pair_id {:?}", pair.pair_id)));
            }
            pair.meta().validate().map_err(|e| bad(e.to_string()))?;
        }
        let mut methods = Vec::new();
        for name in &self.methods {
            let m: FusionMethod = name.parse().map_err(|e: panfuse::Error| bad(e.to_string()))?;
            if methods.contains(&m) {
                return Err(bad(format!("duplicate method {}", m.name())));
            }
            methods.push(m);
        }
        let pairs = self
            .pairs
            .into_iter()
            .map(|mut p| {
                p.ms_path = base.join(&p.ms_path);
                p.pan_path = base.join(&p.pan_path);
                p
            })
            .collect();
        Ok(BatchPlan {
            pairs,
            methods,
            output_dir: base.join(self.output_dir),
            csa_percentile: self.csa_percentile,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<BatchPlan> {
        let m: BatchManifest = serde_json::from_str(json).map_err(|e| CliError::Manifest {
            path: "m.json".into(),
            message: e.to_string(),
        })?;
        m.plan(Path::new("m.json"), Path::new("/data"))
    }

    #[test]
    fn resolves_paths_and_defaults() {
        let plan = parse(
            r#"{"pairs":[{"pair_id":"a","ms_path":"a/ms.ppm","pan_path":"/abs/pan.pgm",
                "ms_sensor":"IKONOS-2","ms_resolution_m":4,"pan_resolution_m":1}],
                "methods":["sf","HFM"],"output_dir":"out"}"#,
        )
        .unwrap();
        assert_eq!(plan.pairs[0].ms_path, Path::new("/data/a/ms.ppm"));
        assert_eq!(plan.pairs[0].pan_path, Path::new("/abs/pan.pgm"));
        assert_eq!(plan.output_dir, Path::new("/data/out"));
        assert_eq!(plan.methods, vec![FusionMethod::Sf, FusionMethod::Hfm]);
        assert_eq!(plan.csa_percentile, 90.0);
        assert_eq!(plan.pairs[0].meta().label(), "IKONOS-2 (4/1 m)");
    }

    #[test]
    fn rejects_invalid_manifests() {
        let pair = r#"{"pair_id":"a","ms_path":"m","pan_path":"p"}"#;
        let cases = [
            format!(r#"{{"pairs":[{pair},{pair}],"methods":["SF"],"output_dir":"o"}}"#),
            format!(r#"{{"pairs":[{pair}],"methods":[],"output_dir":"o"}}"#),
            format!(r#"{{"pairs":[{pair}],"methods":["WT"],"output_dir":"o"}}"#),
            format!(r#"{{"pairs":[{pair}],"methods":["SF"],"output_dir":"o","csa_percentile":100}}"#),
            format!(r#"{{"pairs":[{pair}],"methods":["SF"]}}"#),
            r#"{"pairs":[{"pair_id":"../x","ms_path":"m","pan_path":"p"}],"methods":["SF"],"output_dir":"o"}"#.to_string(),
            r#"{"pairs":[{"pair_id":"a","ms_path":"m","pan_path":"p","ms_resolution_m":1,"pan_resolution_m":4}],"methods":["SF"],"output_dir":"o"}"#.to_string(),
        ];
        for json in &cases {
            assert!(matches!(parse(json), Err(CliError::Manifest { .. })), "{json}");
        }
    }
}
