//! TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifiers::ClassifierKind;
use crate::eval::{CentralityScope, Protocol};
use crate::features::FeatureSet;
use crate::graph::GraphModel;

/// Directory searched for relative network paths that do not resolve
/// against the config file's directory.
pub const DATA_DIR_ENV: &str = "LATENT_INFECTION_DATA";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSource {
    pub name: String,
    /// Edge-list file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GraphModel>,
    /// Generator seed; derived from the master seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub lambda: f64,
    pub stop_fraction: f64,
    pub observed_fractions: Vec<f64>,
    pub n_train_runs: usize,
    pub n_test_runs: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        let p = Protocol::default();
        SimulationConfig {
            lambda: p.lambda,
            stop_fraction: p.stop_fraction,
            observed_fractions: vec![0.05, 0.10, 0.15, 0.20, 0.25],
            n_train_runs: p.n_train_runs,
            n_test_runs: p.n_test_runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IbConfig {
    pub alpha: f64,
}

impl Default for IbConfig {
    fn default() -> Self {
        IbConfig { alpha: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassificationConfig {
    pub classifiers: Vec<ClassifierKind>,
    pub feature_sets: Vec<FeatureSet>,
    pub centrality_scope: CentralityScope,
}

impl Default for ClassificationConfig {
    fn default() -> Self {
        let p = Protocol::default();
        ClassificationConfig {
            classifiers: p.classifiers,
            feature_sets: p.feature_sets,
            centrality_scope: p.centrality_scope,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: u64,
    pub out_dir: PathBuf,
    pub simulation: SimulationConfig,
    pub ib: IbConfig,
    pub classification: ClassificationConfig,
    #[serde(rename = "network")]
    pub networks: Vec<NetworkSource>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            master_seed: 1,
            out_dir: PathBuf::from("results"),
            simulation: SimulationConfig::default(),
            ib: IbConfig::default(),
            classification: ClassificationConfig::default(),
            networks: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RunConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut names = std::collections::BTreeSet::new();
        for net in &self.networks {
            if net.name.is_empty() || net.name.contains(['/', '\\']) {
                return Err(ConfigError::Invalid(format!("bad network name `{}`", net.name)));
            }
            if !names.insert(&net.name) {
                return Err(ConfigError::Invalid(format!("network `{}` listed twice", net.name)));
            }
            if net.path.is_some() == net.generator.is_some() {
                return Err(ConfigError::Invalid(format!(
                    "network `{}` needs exactly one of `path` or `generator`",
                    net.name
                )));
            }
        }
        if self.simulation.observed_fractions.is_empty() {
            return Err(ConfigError::Invalid("no observed fractions".into()));
        }
        for &f in &self.simulation.observed_fractions {
            self.protocol(f)
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// The experiment protocol of one observed fraction.
    pub fn protocol(&self, observed_fraction: f64) -> Protocol {
        Protocol {
            lambda: self.simulation.lambda,
            stop_fraction: self.simulation.stop_fraction,
            observed_fraction,
            alpha: self.ib.alpha,
            n_train_runs: self.simulation.n_train_runs,
            n_test_runs: self.simulation.n_test_runs,
            classifiers: self.classification.classifiers.clone(),
            feature_sets: self.classification.feature_sets.clone(),
            centrality_scope: self.classification.centrality_scope,
        }
    }
}

/// Resolve a network path: absolute paths as given, otherwise relative to
/// `base`, falling back to the data directory named by [`DATA_DIR_ENV`].
pub fn resolve_path(path: &Path, base: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    let local = base.join(path);
    if local.exists() {
        return local;
    }
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let cached = Path::new(&dir).join(path);
        if cached.exists() {
            return cached;
        }
    }
    local
}
