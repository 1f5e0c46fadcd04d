use ndarray::{Array1, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::data::PreparedGraph;
use super::layer::{GatLayerParams, LayerCache};
use super::GatError;
use crate::graph::EDGE_DIM;

/// Hidden width of the shipped configuration.
pub const DEFAULT_HIDDEN: usize = 672;
/// Lower clamp inside the cross-entropy logarithm.
pub const LOG_CLAMP: f64 = 1e-12;

/// Two GATv2 layers with ReLU between them, then three linear + softmax
/// heads (coarse, intermediate, fine) on the shared trunk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatModel {
    pub d_in: usize,
    pub d_h: usize,
    pub level_sizes: [usize; 3],
    pub layer1: GatLayerParams,
    pub layer2: GatLayerParams,
    pub heads: [Array2<f64>; 3],
    pub biases: [Array1<f64>; 3],
}

#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub h1: Array2<f64>,
    pub relu: Array2<f64>,
    pub trunk: Array2<f64>,
    pub cache1: LayerCache,
    pub cache2: LayerCache,
    pub logits: [Array2<f64>; 3],
    pub probs: [Array2<f64>; 3],
}

impl ForwardTrace {
    /// Most probable category per node at `level` (1-based).
    pub fn predictions(&self, level: usize) -> Vec<usize> {
        self.probs[level - 1]
            .axis_iter(Axis(0))
            .map(|row| {
                row.iter().enumerate().fold((0, f64::NEG_INFINITY), |best, (c, &p)| if p > best.1 { (c, p) } else { best }).0
            })
            .collect()
    }
}

fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-limit..limit))
}

fn softmax_rows(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.axis_iter_mut(Axis(0)) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let total = row.sum();
        row.mapv_inplace(|v| v / total);
    }
    out
}

impl GatModel {
    pub fn zeros(d_in: usize, d_h: usize, level_sizes: [usize; 3]) -> Self {
        GatModel {
            d_in,
            d_h,
            level_sizes,
            layer1: GatLayerParams::zeros(d_in, d_h),
            layer2: GatLayerParams::zeros(d_h, d_h),
            heads: level_sizes.map(|l| Array2::zeros((l, d_h))),
            biases: level_sizes.map(Array1::zeros),
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(d_in: usize, d_h: usize, level_sizes: [usize; 3], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Self::zeros(d_in, d_h, level_sizes);
        for layer in [&mut m.layer1, &mut m.layer2] {
            let (o, i) = layer.phi_s.dim();
            layer.phi_s = glorot(o, i, &mut rng);
            layer.phi_t = glorot(o, i, &mut rng);
            layer.phi_e = glorot(o, EDGE_DIM, &mut rng);
            layer.a = glorot(1, o, &mut rng).into_shape_with_order(o).unwrap();
        }
        for (k, head) in m.heads.iter_mut().enumerate() {
            *head = glorot(level_sizes[k], d_h, &mut rng);
        }
        m
    }

    pub fn parameter_count(&self) -> usize {
        self.layer1.parameter_count()
            + self.layer2.parameter_count()
            + self.heads.iter().map(|h| h.len()).sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Parameter tensors in a fixed order, as flat row-major slices.
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::new();
        for l in [&self.layer1, &self.layer2] {
            out.push(l.phi_s.as_slice().unwrap());
            out.push(l.phi_t.as_slice().unwrap());
            out.push(l.phi_e.as_slice().unwrap());
            out.push(l.a.as_slice().unwrap());
        }
        for k in 0..3 {
            out.push(self.heads[k].as_slice().unwrap());
            out.push(self.biases[k].as_slice().unwrap());
        }
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        for l in [&mut self.layer1, &mut self.layer2] {
            out.push(l.phi_s.as_slice_mut().unwrap());
            out.push(l.phi_t.as_slice_mut().unwrap());
            out.push(l.phi_e.as_slice_mut().unwrap());
            out.push(l.a.as_slice_mut().unwrap());
        }
        let GatModel { heads, biases, .. } = self;
        for (h, b) in heads.iter_mut().zip(biases.iter_mut()) {
            out.push(h.as_slice_mut().unwrap());
            out.push(b.as_slice_mut().unwrap());
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }

    fn check_input(&self, g: &PreparedGraph) -> Result<(), GatError> {
        if g.x.ncols() != self.d_in {
            return Err(GatError::DimensionMismatch { expected: self.d_in, found: g.x.ncols() });
        }
        Ok(())
    }

    pub fn forward(&self, g: &PreparedGraph) -> Result<ForwardTrace, GatError> {
        self.check_input(g)?;
        let (h1, cache1) = self.layer1.forward(g, &g.x);
        let relu = h1.mapv(|v| v.max(0.0));
        let (trunk, cache2) = self.layer2.forward(g, &relu);
        let logits: [Array2<f64>; 3] = std::array::from_fn(|k| trunk.dot(&self.heads[k].t()) + &self.biases[k]);
        let probs = std::array::from_fn(|k| softmax_rows(&logits[k]));
        Ok(ForwardTrace { h1, relu, trunk, cache1, cache2, logits, probs })
    }

    /// `Σ_k w_k · mean_i −log max(p_k[i, y_k], 1e-12)` and its gradient.
    pub fn loss_and_gradients(&self, g: &PreparedGraph, head_weights: [f64; 3]) -> Result<(f64, GatModel), GatError> {
        let labels: Vec<[usize; 3]> = g
            .labels
            .iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| GatError::UnlabeledNode { drawing: g.drawing_id.clone(), node: g.node_ids[i] }))
            .collect::<Result<_, _>>()?;
        for y in &labels {
            if let Some(k) = (0..3).find(|&k| y[k] >= self.level_sizes[k]) {
                return Err(GatError::LabelOutOfRange { level: k + 1, label: y[k], size: self.level_sizes[k] });
            }
        }
        let trace = self.forward(g)?;
        let n = g.node_count();
        let mut grads = GatModel::zeros(self.d_in, self.d_h, self.level_sizes);
        let mut loss = 0.0;
        let mut dtrunk = Array2::<f64>::zeros((n, self.d_h));
        for k in 0..3 {
            let w = head_weights[k];
            let probs = &trace.probs[k];
            let mut dlogits = probs.clone();
            for (i, y) in labels.iter().enumerate() {
                let p = probs[[i, y[k]]];
                loss += w * -(p.max(LOG_CLAMP)).ln() / n as f64;
                if p < LOG_CLAMP {
                    dlogits.row_mut(i).fill(0.0);
                } else {
                    dlogits[[i, y[k]]] -= 1.0;
                }
            }
            dlogits *= w / n as f64;
            grads.heads[k] = dlogits.t().dot(&trace.trunk);
            grads.biases[k] = dlogits.sum_axis(Axis(0));
            dtrunk += &dlogits.dot(&self.heads[k]);
        }
        let (g2, drelu) = self.layer2.backward(g, &trace.relu, &trace.cache2, &dtrunk);
        let dh1 = drelu * trace.h1.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 });
        let (g1, _) = self.layer1.backward(g, &g.x, &trace.cache1, &dh1);
        grads.layer1 = g1;
        grads.layer2 = g2;
        Ok((loss, grads))
    }
}

/// Parameter count from the dimensions alone.
pub fn closed_form_parameter_count(d_in: usize, d_h: usize, level_sizes: [usize; 3]) -> usize {
    let layer = |i: usize, o: usize| 2 * o * i + o * EDGE_DIM + o;
    let heads: usize = level_sizes.iter().map(|l| l * d_h + l).sum();
    layer(d_in, d_h) + layer(d_h, d_h) + heads
}
