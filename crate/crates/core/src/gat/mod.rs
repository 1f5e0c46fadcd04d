//! GATv2 network with edge features, hierarchical heads, exact gradients
//! and training.

mod data;
mod layer;
mod model;
mod train;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphConfig;
use crate::labels::LabelMap;

pub use data::{Arc, Normalizer, PreparedGraph};
pub use layer::{softmax_into, GatLayerParams, LayerCache, DEFAULT_LEAKY_SLOPE};
pub use model::{closed_form_parameter_count, ForwardTrace, GatModel, DEFAULT_HIDDEN, LOG_CLAMP};
pub use train::{train, Adam, EpochMetrics, OptimizerKind, TrainConfig, TrainOutcome};

#[derive(Debug, Error)]
pub enum GatError {
    #[error("expected {expected} input features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite feature in drawing {0}")]
    NonFiniteInput(String),
    #[error("node {node} of drawing {drawing} has no label")]
    UnlabeledNode { drawing: String, node: usize },
    #[error("level-{level} label {label} outside 0..{size}")]
    LabelOutOfRange { level: usize, label: usize, size: usize },
    #[error("loss became non-finite at epoch {epoch}")]
    DivergedLoss { epoch: usize, last_good: Box<GatModel> },
    #[error("training set is empty")]
    EmptyDataset,
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Everything needed to run a trained model on new graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub model: GatModel,
    pub normalizer: Normalizer,
    pub label_map: Option<LabelMap>,
    /// Graph construction settings the model was trained with.
    #[serde(default)]
    pub graph: Option<GraphConfig>,
}

impl Checkpoint {
    pub fn new(model: GatModel, normalizer: Normalizer, label_map: Option<LabelMap>) -> Self {
        Checkpoint { format_version: CHECKPOINT_FORMAT_VERSION, model, normalizer, label_map, graph: None }
    }

    pub fn with_graph_config(self, graph: GraphConfig) -> Self {
        Checkpoint { graph: Some(graph), ..self }
    }

    pub fn save(&self, path: &Path) -> Result<(), GatError> {
        let text = serde_json::to_string(self).map_err(|e| GatError::Checkpoint(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| GatError::Checkpoint(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, GatError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| GatError::Checkpoint(format!("{}: {e}", path.display())))?;
        let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| GatError::Checkpoint(e.to_string()))?;
        if ck.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(GatError::Checkpoint(format!("unsupported format version {}", ck.format_version)));
        }
        Ok(ck)
    }
}

#[cfg(test)]
mod tests;
