//! Pipeline configuration as TOML. Every command writes the effective
//! config next to its outputs so the run can be repeated from it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gat::{TrainConfig, DEFAULT_HIDDEN};
use crate::graph::GraphConfig;

pub const SEED_ENV: &str = "VG_SEED";
pub const EFFECTIVE_CONFIG_NAME: &str = "effective_config.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("bad config: {0}")]
    Parse(String),
    #[error("{SEED_ENV}=`{0}` is not an unsigned integer")]
    BadSeed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub hidden: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { hidden: DEFAULT_HIDDEN }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// `builtin:tum`, `builtin:floorplancad` or a TSV path.
    pub labels: String,
    /// Train, validation and test shares. With no validation share,
    /// early stopping holds out a tenth of the training drawings.
    pub split: [f64; 3],
    pub graph: GraphConfig,
    pub model: ModelConfig,
    pub train: TrainConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            labels: "builtin:tum".into(),
            split: [0.8, 0.0, 0.2],
            graph: GraphConfig::default(),
            model: ModelConfig::default(),
            train: TrainConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sets both the graph and training seed.
    pub fn set_seed(&mut self, seed: u64) {
        self.graph.seed = seed;
        self.train.seed = seed;
    }

    /// Applies `VG_SEED` when set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(raw) = std::env::var(SEED_ENV) {
            let seed = raw.trim().parse().map_err(|_| ConfigError::BadSeed(raw.clone()))?;
            self.set_seed(seed);
        }
        Ok(())
    }

    pub fn write_effective(&self, dir: &Path) -> Result<(), ConfigError> {
        let path = dir.join(EFFECTIVE_CONFIG_NAME);
        std::fs::write(&path, self.to_toml())
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })
    }
}
