//! Dataset splits, evaluation reports and prediction export.

mod metrics;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gat::{GatError, GatModel, PreparedGraph};
use crate::svg::{write_flat_svg, NormalizedPath};

pub use metrics::{
    classification_report, format_report, weighted_f1, weighted_f1_excluding, Averages, CategoryRow,
    ClassificationReport, ConfusionAccumulator,
};

pub const PALETTE_TXT: &str = include_str!("../../data/palette.txt");

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("y_true has {truth} entries, y_pred has {pred}")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("category {category} outside 0..{categories}")]
    CategoryOutOfRange { category: usize, categories: usize },
    #[error("report has no support")]
    EmptyReport,
    #[error("split ratios must be non-negative and sum to 1, got {0:?}")]
    BadRatios([f64; 3]),
    #[error("level must be 1, 2 or 3, got {0}")]
    BadLevel(usize),
    #[error(transparent)]
    Model(#[from] GatError),
}

/// Splits at item granularity into train/validation/test. Train and
/// validation sizes are the rounded ratio shares; test gets the rest.
pub fn split_dataset<T: Clone>(items: &[T], ratios: [f64; 3], seed: u64) -> Result<[Vec<T>; 3], EvalError> {
    if ratios.iter().any(|r| *r < 0.0 || !r.is_finite()) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(EvalError::BadRatios(ratios));
    }
    let n = items.len();
    let n_train = ((ratios[0] * n as f64).round() as usize).min(n);
    let n_val = ((ratios[1] * n as f64).round() as usize).min(n - n_train);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut parts = [order[..n_train].to_vec(), order[n_train..n_train + n_val].to_vec(), order[n_train + n_val..].to_vec()];
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts.map(|p| p.into_iter().map(|i| items[i].clone()).collect()))
}

/// Argmax predictions of every labeled node at `level` (1–3), accumulated
/// per graph in parallel and merged in input order.
pub fn evaluate(model: &GatModel, graphs: &[PreparedGraph], level: usize) -> Result<ClassificationReport, EvalError> {
    if !(1..=3).contains(&level) {
        return Err(EvalError::BadLevel(level));
    }
    let categories = model.level_sizes[level - 1];
    let parts: Vec<Result<ConfusionAccumulator, EvalError>> = graphs
        .par_iter()
        .map(|g| {
            let pred = model.forward(g)?.predictions(level);
            let mut acc = ConfusionAccumulator::new(categories);
            for (y, p) in g.labels.iter().zip(pred) {
                if let Some(y) = y {
                    acc.add(y[level - 1], p)?;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = ConfusionAccumulator::new(categories);
    for part in parts {
        total.merge(&part?);
    }
    Ok(total.report())
}

pub fn palette() -> Vec<String> {
    PALETTE_TXT.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
}

pub fn category_color(category: usize) -> String {
    let p = palette();
    p[category % p.len()].clone()
}

/// Flat SVG whose strokes encode the predicted category of each path;
/// paths without a prediction keep their own stroke.
pub fn recolor_svg(paths: &[NormalizedPath], predictions: &BTreeMap<usize, usize>) -> String {
    let colors = palette();
    let pick = |p: &NormalizedPath| predictions.get(&p.path_id).map(|&c| colors[c % colors.len()].clone());
    write_flat_svg(paths, Some(&pick))
}
