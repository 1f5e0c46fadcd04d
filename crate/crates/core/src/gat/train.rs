use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::PreparedGraph;
use super::model::GatModel;
use super::GatError;
use crate::eval::{evaluate, weighted_f1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub optimizer: OptimizerKind,
    /// Graphs per optimizer step.
    pub batch_size: usize,
    pub head_weights: [f64; 3],
    pub seed: u64,
    /// Stop once level-3 training accuracy reaches this value.
    pub target_accuracy: Option<f64>,
    /// Stop after this many epochs without validation improvement and keep
    /// the best model.
    pub patience: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            optimizer: OptimizerKind::Adam,
            batch_size: 1,
            head_weights: [1.0, 1.0, 1.0],
            seed: 0,
            target_accuracy: None,
            patience: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    /// Mean per-graph loss over the epoch's steps.
    pub loss: f64,
    pub train_accuracy: f64,
    /// Level-3 weighted F1 on the validation graphs (training graphs when
    /// there is no validation split).
    pub val_wf1: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: GatModel,
    pub history: Vec<EpochMetrics>,
}

/// First and second moment estimates per parameter tensor.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step: i32,
}

impl Adam {
    pub fn new(model: &GatModel) -> Self {
        let zeros: Vec<Vec<f64>> = model.tensors().iter().map(|t| vec![0.0; t.len()]).collect();
        Adam { m: zeros.clone(), v: zeros, step: 0 }
    }

    pub fn apply(&mut self, model: &mut GatModel, grads: &GatModel, cfg: &TrainConfig) {
        self.step += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.step);
        let c2 = 1.0 - cfg.beta2.powi(self.step);
        for (k, (p, g)) in model.tensors_mut().into_iter().zip(grads.tensors()).enumerate() {
            let (m, v) = (&mut self.m[k], &mut self.v[k]);
            for i in 0..p.len() {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                p[i] -= cfg.lr * (m[i] / c1) / ((v[i] / c2).sqrt() + cfg.eps);
            }
        }
    }
}

fn sgd_step(model: &mut GatModel, grads: &GatModel, lr: f64) {
    for (p, g) in model.tensors_mut().into_iter().zip(grads.tensors()) {
        for (pi, gi) in p.iter_mut().zip(g) {
            *pi -= lr * gi;
        }
    }
}

fn accumulate(into: &mut GatModel, g: &GatModel, scale: f64) {
    for (a, b) in into.tensors_mut().into_iter().zip(g.tensors()) {
        for (ai, bi) in a.iter_mut().zip(b) {
            *ai += scale * bi;
        }
    }
}

/// Trains in place of a copy of `model`. Each epoch visits the training
/// graphs in a seeded order; per-graph gradients within a batch are computed
/// in parallel and summed in drawing-id order.
pub fn train(
    model: &GatModel,
    train_set: &[PreparedGraph],
    val_set: &[PreparedGraph],
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochMetrics),
) -> Result<TrainOutcome, GatError> {
    if train_set.is_empty() {
        return Err(GatError::EmptyDataset);
    }
    let mut model = model.clone();
    let mut adam = Adam::new(&model);
    let mut history = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut best: Option<(f64, GatModel)> = None;
    let mut since_best = 0;
    let monitor = if val_set.is_empty() { train_set } else { val_set };

    for epoch in 1..=cfg.epochs {
        order.sort_unstable();
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(cfg.batch_size.max(1)) {
            let mut members = batch.to_vec();
            members.sort_by(|&a, &b| train_set[a].drawing_id.cmp(&train_set[b].drawing_id));
            let results: Vec<Result<(f64, GatModel), GatError>> = members
                .par_iter()
                .map(|&i| model.loss_and_gradients(&train_set[i], cfg.head_weights))
                .collect();
            let mut total = GatModel::zeros(model.d_in, model.d_h, model.level_sizes);
            let scale = 1.0 / members.len() as f64;
            for r in results {
                let (loss, g) = r?;
                if !loss.is_finite() {
                    return Err(GatError::DivergedLoss { epoch, last_good: Box::new(model) });
                }
                loss_sum += loss;
                accumulate(&mut total, &g, scale);
            }
            let before = model.clone();
            match cfg.optimizer {
                OptimizerKind::Adam => adam.apply(&mut model, &total, cfg),
                OptimizerKind::Sgd => sgd_step(&mut model, &total, cfg.lr),
            }
            if !model.is_finite() {
                return Err(GatError::DivergedLoss { epoch, last_good: Box::new(before) });
            }
        }
        let accuracy = evaluate(&model, train_set, 3).map_err(unwrap_model_error)?.accuracy;
        let val_report = evaluate(&model, monitor, 3).map_err(unwrap_model_error)?;
        let metrics = EpochMetrics {
            epoch,
            loss: loss_sum / train_set.len() as f64,
            train_accuracy: accuracy,
            val_wf1: weighted_f1(&val_report).unwrap_or(0.0),
        };
        log::info!(
            "epoch {epoch}: loss {:.5} train acc {:.4} val wF1 {:.4}",
            metrics.loss,
            metrics.train_accuracy,
            metrics.val_wf1
        );
        on_epoch(&metrics);
        history.push(metrics.clone());

        if let Some(patience) = cfg.patience {
            if best.as_ref().is_none_or(|(score, _)| metrics.val_wf1 > *score) {
                best = Some((metrics.val_wf1, model.clone()));
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= patience {
                    break;
                }
            }
        }
        if cfg.target_accuracy.is_some_and(|t| accuracy >= t) {
            break;
        }
    }
    let model = match (cfg.patience, best) {
        (Some(_), Some((_, m))) => m,
        _ => model,
    };
    Ok(TrainOutcome { model, history })
}

fn unwrap_model_error(e: crate::eval::EvalError) -> GatError {
    match e {
        crate::eval::EvalError::Model(m) => m,
        other => GatError::Evaluation(other.to_string()),
    }
}
