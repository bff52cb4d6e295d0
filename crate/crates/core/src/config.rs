//! Run configuration, read from a sectioned TOML file.
//!
//! ```toml
//! [ingest]
//! inputs = [{ path = "drugbank.nt.gz" }, { path = "omim.nt", dataset = "omim" }]
//! predicate_blocklist = ["http://www.w3.org/1999/02/22-rdf-syntax-ns#"]
//! malformed_policy = "skip-malformed"
//!
//! [graph]
//! lmax = 4
//!
//! [clustering]
//! capacity = 5000000
//! k_min = 2
//! k_max = 10
//! seed = 42
//!
//! [run]
//! output_dir = "run"
//! cache_dir = ".semcluster-cache"
//! ```
//!
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{FcmParams, HfcmConfig};
use crate::rdf::{Blocklist, MalformedPolicy, OWL_NS, RDFS_NS, RDF_NS};
use crate::schema::DEFAULT_LMAX;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub path: PathBuf,
    /// Defaults to the file name without `.gz` / `.nt` extensions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
}

impl InputSpec {
    pub fn dataset_tag(&self) -> String {
        if let Some(tag) = &self.dataset {
            return tag.clone();
        }
        let name = self
            .path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let name = name.strip_suffix(".gz").unwrap_or(&name);
        let name = name
            .strip_suffix(".nt")
            .or_else(|| name.strip_suffix(".ntriples"))
            .unwrap_or(name);
        name.to_owned()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IngestConfig {
    pub inputs: Vec<InputSpec>,
    pub predicate_blocklist: Vec<String>,
    pub malformed_policy: MalformedPolicy,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            predicate_blocklist: vec![RDF_NS.into(), RDFS_NS.into(), OWL_NS.into()],
            malformed_policy: MalformedPolicy::SkipMalformed,
        }
    }
}

impl IngestConfig {
    pub fn blocklist(&self) -> Blocklist {
        Blocklist::new(self.predicate_blocklist.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GraphConfig {
    pub lmax: u32,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self { lmax: DEFAULT_LMAX }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusteringConfig {
    pub capacity: u64,
    pub k_min: usize,
    pub k_max: usize,
    pub fuzziness: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_depth: usize,
    /// Rebuild the similarity matrix from the member predicates at every
    /// node instead of slicing the root matrix.
    pub recompute_per_node: bool,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        let h = HfcmConfig::default();
        Self {
            capacity: h.capacity,
            k_min: h.k_min,
            k_max: h.k_max,
            fuzziness: h.fcm.fuzziness,
            tolerance: h.fcm.tolerance,
            max_iterations: h.fcm.max_iterations,
            seed: h.fcm.seed,
            restarts: h.fcm.restarts,
            max_depth: h.max_depth,
            recompute_per_node: false,
        }
    }
}

impl ClusteringConfig {
    pub fn hfcm(&self) -> HfcmConfig {
        HfcmConfig {
            capacity: self.capacity,
            k_min: self.k_min,
            k_max: self.k_max,
            max_depth: self.max_depth,
            fcm: FcmParams {
                k: self.k_min,
                fuzziness: self.fuzziness,
                tolerance: self.tolerance,
                max_iterations: self.max_iterations,
                seed: self.seed,
                restarts: self.restarts,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub output_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub log_level: String,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("run"),
            cache_dir: PathBuf::from(".semcluster-cache"),
            log_level: "info".into(),
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub ingest: IngestConfig,
    pub graph: GraphConfig,
    pub clustering: ClusteringConfig,
    pub run: RunSection,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a config file. Relative input paths are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Self::from_toml_str(&text)?;
        if let Some(base) = path.parent() {
            for input in &mut config.ingest.inputs {
                if input.path.is_relative() {
                    input.path = base.join(&input.path);
                }
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.clustering;
        if c.capacity == 0 {
            return Err(ConfigError::Invalid("capacity must be positive".into()));
        }
        if c.k_min < 2 || c.k_max < c.k_min {
            return Err(ConfigError::Invalid(format!(
                "k range [{}, {}] is invalid",
                c.k_min, c.k_max
            )));
        }
        if !(c.fuzziness > 1.0) {
            return Err(ConfigError::Invalid("fuzziness must be > 1".into()));
        }
        if !(c.tolerance > 0.0) || c.max_iterations == 0 || c.restarts == 0 {
            return Err(ConfigError::Invalid(
                "tolerance, max_iterations and restarts must be positive".into(),
            ));
        }
        if self.graph.lmax == 0 {
            return Err(ConfigError::Invalid("lmax must be at least 1".into()));
        }
        let mut tags: Vec<String> = self.ingest.inputs.iter().map(InputSpec::dataset_tag).collect();
        if tags.iter().any(String::is_empty) {
            return Err(ConfigError::Invalid("empty dataset tag".into()));
        }
        tags.sort();
        if let Some(w) = tags.windows(2).find(|w| w[0] == w[1]) {
            return Err(ConfigError::Invalid(format!("dataset tag {:?} used twice", w[0])));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_empty_file() {
        let c = RunConfig::from_toml_str("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.graph.lmax, 4);
        assert_eq!(c.clustering.fuzziness, 2.0);
        assert_eq!(c.clustering.max_depth, 16);
        assert_eq!(c.ingest.predicate_blocklist.len(), 3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml_str("[clustering]\ncapacty = 5\n").is_err());
        assert!(RunConfig::from_toml_str("[nope]\n").is_err());
    }

    #[test]
    fn sections_parse() {
        let c = RunConfig::from_toml_str(
            r#"
[ingest]
inputs = [{ path = "data/drugbank.nt.gz" }, { path = "x.nt", dataset = "omim" }]
malformed_policy = "strict"
[clustering]
capacity = 10
seed = 9
"#,
        )
        .unwrap();
        assert_eq!(c.ingest.inputs[0].dataset_tag(), "drugbank");
        assert_eq!(c.ingest.inputs[1].dataset_tag(), "omim");
        assert_eq!(c.ingest.malformed_policy, MalformedPolicy::Strict);
        assert_eq!(c.clustering.hfcm().fcm.seed, 9);
    }

    #[test]
    fn duplicate_tags_rejected() {
        let err = RunConfig::from_toml_str(
            "[ingest]\ninputs = [{ path = \"a/x.nt\" }, { path = \"b/x.nt\" }]\n",
        );
        assert!(matches!(err, Err(ConfigError::Invalid(_))));
    }
}
