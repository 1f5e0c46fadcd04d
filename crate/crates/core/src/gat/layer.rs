use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::data::PreparedGraph;
use crate::graph::EDGE_DIM;

pub const DEFAULT_LEAKY_SLOPE: f64 = 0.2;

/// One GATv2 layer with edge features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatLayerParams {
    /// Self projection, `d_out × d_in`.
    pub phi_s: Array2<f64>,
    /// Neighbour projection, `d_out × d_in`.
    pub phi_t: Array2<f64>,
    /// Edge projection, `d_out × 10`.
    pub phi_e: Array2<f64>,
    pub a: Array1<f64>,
    pub leaky_slope: f64,
}

/// Forward intermediates kept for the backward pass.
#[derive(Debug, Clone)]
pub struct LayerCache {
    pub s: Array2<f64>,
    pub t: Array2<f64>,
    /// Projected edge features, one row per undirected edge.
    pub p: Array2<f64>,
    /// Attention score per arc, before the softmax.
    pub scores: Vec<f64>,
    /// Attention coefficient per arc.
    pub alpha: Vec<f64>,
}

fn leaky(u: f64, slope: f64) -> f64 {
    if u > 0.0 {
        u
    } else {
        slope * u
    }
}

/// Softmax with the maximum subtracted before exponentiation.
pub fn softmax_into(scores: &[f64], out: &mut [f64]) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (o, s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

impl GatLayerParams {
    pub fn zeros(d_in: usize, d_out: usize) -> Self {
        GatLayerParams {
            phi_s: Array2::zeros((d_out, d_in)),
            phi_t: Array2::zeros((d_out, d_in)),
            phi_e: Array2::zeros((d_out, EDGE_DIM)),
            a: Array1::zeros(d_out),
            leaky_slope: DEFAULT_LEAKY_SLOPE,
        }
    }

    pub fn d_in(&self) -> usize {
        self.phi_s.ncols()
    }

    pub fn d_out(&self) -> usize {
        self.phi_s.nrows()
    }

    pub fn parameter_count(&self) -> usize {
        self.phi_s.len() + self.phi_t.len() + self.phi_e.len() + self.a.len()
    }

    pub fn is_finite(&self) -> bool {
        [&self.phi_s, &self.phi_t, &self.phi_e].iter().all(|m| m.iter().all(|v| v.is_finite()))
            && self.a.iter().all(|v| v.is_finite())
    }

    fn score(&self, s: &[f64], t: &[f64], p: Option<&[f64]>) -> f64 {
        let a = self.a.as_slice().expect("standard layout");
        let mut z = 0.0;
        for k in 0..a.len() {
            let u = s[k] + t[k] + p.map_or(0.0, |p| p[k]);
            z += a[k] * leaky(u, self.leaky_slope);
        }
        z
    }

    /// Attention coefficients for every arc of `g` given input features `x`.
    pub fn attention(&self, g: &PreparedGraph, x: &Array2<f64>) -> Vec<f64> {
        self.forward(g, x).1.alpha
    }

    /// `x'_i = α_ii Φs x_i + Σ_j α_ij Φt x_j`.
    pub fn forward(&self, g: &PreparedGraph, x: &Array2<f64>) -> (Array2<f64>, LayerCache) {
        let n = g.node_count();
        let d = self.d_out();
        let s = x.dot(&self.phi_s.t());
        let t = x.dot(&self.phi_t.t());
        let p = g.edge_x.dot(&self.phi_e.t());
        let (ss, ts, ps) = (s.as_slice().unwrap(), t.as_slice().unwrap(), p.as_slice().unwrap());
        let row = |r: usize| r * d..(r + 1) * d;
        let mut scores = vec![0.0; g.arcs.len()];
        let mut alpha = vec![0.0; g.arcs.len()];
        let mut out = Array2::zeros((n, d));
        let os = out.as_slice_mut().unwrap();
        for i in 0..n {
            let range = g.offsets[i]..g.offsets[i + 1];
            for (k, arc) in g.arcs[range.clone()].iter().enumerate() {
                let pe = arc.edge.map(|e| &ps[row(e)]);
                scores[range.start + k] = self.score(&ss[row(i)], &ts[row(arc.j)], pe);
            }
            softmax_into(&scores[range.clone()], &mut alpha[range.clone()]);
            let oi = &mut os[i * d..(i + 1) * d];
            for k in range {
                let arc = g.arcs[k];
                let src = if arc.edge.is_none() { &ss[row(i)] } else { &ts[row(arc.j)] };
                for c in 0..d {
                    oi[c] += alpha[k] * src[c];
                }
            }
        }
        (out, LayerCache { s, t, p, scores, alpha })
    }

    /// Gradients of the parameters and of the input, given `dy = ∂L/∂x'`.
    pub fn backward(
        &self,
        g: &PreparedGraph,
        x: &Array2<f64>,
        cache: &LayerCache,
        dy: &Array2<f64>,
    ) -> (GatLayerParams, Array2<f64>) {
        let n = g.node_count();
        let d = self.d_out();
        let slope = self.leaky_slope;
        let a = self.a.as_slice().unwrap();
        let (ss, ts, ps) = (cache.s.as_slice().unwrap(), cache.t.as_slice().unwrap(), cache.p.as_slice().unwrap());
        let dys = dy.as_slice().unwrap();
        let mut ds = vec![0.0; n * d];
        let mut dt = vec![0.0; n * d];
        let mut dp = vec![0.0; cache.p.nrows() * d];
        let mut da = vec![0.0; d];
        let mut dalpha = Vec::new();
        for i in 0..n {
            let range = g.offsets[i]..g.offsets[i + 1];
            let dyi = &dys[i * d..(i + 1) * d];
            dalpha.clear();
            for k in range.clone() {
                let arc = g.arcs[k];
                let alpha = cache.alpha[k];
                let (src, dsrc) = if arc.edge.is_none() {
                    (&ss[i * d..(i + 1) * d], &mut ds[i * d..(i + 1) * d])
                } else {
                    (&ts[arc.j * d..(arc.j + 1) * d], &mut dt[arc.j * d..(arc.j + 1) * d])
                };
                let mut dot = 0.0;
                for c in 0..d {
                    dot += dyi[c] * src[c];
                    dsrc[c] += alpha * dyi[c];
                }
                dalpha.push(dot);
            }
            let mean: f64 = range.clone().zip(&dalpha).map(|(k, da)| cache.alpha[k] * da).sum();
            for (k, dak) in range.zip(&dalpha) {
                let arc = g.arcs[k];
                let dz = cache.alpha[k] * (dak - mean);
                if dz == 0.0 {
                    continue;
                }
                for c in 0..d {
                    let u = ss[i * d + c] + ts[arc.j * d + c] + arc.edge.map_or(0.0, |e| ps[e * d + c]);
                    da[c] += dz * leaky(u, slope);
                    let du = dz * a[c] * if u > 0.0 { 1.0 } else { slope };
                    ds[i * d + c] += du;
                    dt[arc.j * d + c] += du;
                    if let Some(e) = arc.edge {
                        dp[e * d + c] += du;
                    }
                }
            }
        }
        let ds = Array2::from_shape_vec((n, d), ds).unwrap();
        let dt = Array2::from_shape_vec((n, d), dt).unwrap();
        let dp = Array2::from_shape_vec((cache.p.nrows(), d), dp).unwrap();
        let grads = GatLayerParams {
            phi_s: ds.t().dot(x),
            phi_t: dt.t().dot(x),
            phi_e: dp.t().dot(&g.edge_x),
            a: Array1::from(da),
            leaky_slope: slope,
        };
        let dx = ds.dot(&self.phi_s) + dt.dot(&self.phi_t);
        (grads, dx)
    }
}
