use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use super::GatError;
use crate::graph::{DrawingGraph, EDGE_DIM};

/// One attention arc `i ← j`. Self-arcs carry no edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub i: usize,
    pub j: usize,
    pub edge: Option<usize>,
}

/// A graph in model-ready form: standardized features, arcs grouped by
/// receiving node (self-arc first, then neighbours by index).
#[derive(Debug, Clone)]
pub struct PreparedGraph {
    pub drawing_id: String,
    pub node_ids: Vec<usize>,
    pub x: Array2<f64>,
    pub edge_x: Array2<f64>,
    pub arcs: Vec<Arc>,
    /// Arcs of node `i` are `arcs[offsets[i]..offsets[i + 1]]`.
    pub offsets: Vec<usize>,
    pub labels: Vec<Option<[usize; 3]>>,
}

impl PreparedGraph {
    pub fn new(graph: &DrawingGraph, norm: &Normalizer) -> Result<Self, GatError> {
        let n = graph.nodes.len();
        let d = norm.node_mean.len();
        let mut x = Array2::zeros((n, d));
        for (r, node) in graph.nodes.iter().enumerate() {
            if node.x.len() != d {
                return Err(GatError::DimensionMismatch { expected: d, found: node.x.len() });
            }
            for (c, v) in node.x.iter().enumerate() {
                x[[r, c]] = (v - norm.node_mean[c]) / norm.node_std[c];
            }
        }
        let mut edge_x = Array2::zeros((graph.edges.len(), EDGE_DIM));
        for (r, e) in graph.edges.iter().enumerate() {
            for c in 0..EDGE_DIM {
                edge_x[[r, c]] = (e.f[c] - norm.edge_mean[c]) / norm.edge_std[c];
            }
        }
        if x.iter().chain(edge_x.iter()).any(|v| !v.is_finite()) {
            return Err(GatError::NonFiniteInput(graph.drawing_id.clone()));
        }
        let index = |id: usize| graph.nodes.binary_search_by_key(&id, |nd| nd.id).expect("validated graph");
        let mut neighbours: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, e) in graph.edges.iter().enumerate() {
            let (s, t) = (index(e.s), index(e.d));
            neighbours[s].push((t, k));
            neighbours[t].push((s, k));
        }
        let mut arcs = Vec::with_capacity(n + 2 * graph.edges.len());
        let mut offsets = Vec::with_capacity(n + 1);
        for (i, nb) in neighbours.iter_mut().enumerate() {
            offsets.push(arcs.len());
            arcs.push(Arc { i, j: i, edge: None });
            nb.sort_unstable();
            arcs.extend(nb.iter().map(|&(j, k)| Arc { i, j, edge: Some(k) }));
        }
        offsets.push(arcs.len());
        Ok(PreparedGraph {
            drawing_id: graph.drawing_id.clone(),
            node_ids: graph.nodes.iter().map(|nd| nd.id).collect(),
            x,
            edge_x,
            arcs,
            offsets,
            labels: graph.nodes.iter().map(|nd| nd.y).collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.x.nrows()
    }

    pub fn node_arcs(&self, i: usize) -> &[Arc] {
        &self.arcs[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Per-component standardization of node and edge features, fitted on
/// training graphs and stored with the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub node_mean: Vec<f64>,
    pub node_std: Vec<f64>,
    pub edge_mean: Vec<f64>,
    pub edge_std: Vec<f64>,
}

fn column_stats(rows: &Array2<f64>) -> (Vec<f64>, Vec<f64>) {
    if rows.nrows() == 0 {
        return (vec![0.0; rows.ncols()], vec![1.0; rows.ncols()]);
    }
    let mean: Array1<f64> = rows.mean_axis(Axis(0)).expect("non-empty");
    let std = rows.std_axis(Axis(0), 0.0).mapv(|s| if s > 1e-12 { s } else { 1.0 });
    (mean.to_vec(), std.to_vec())
}

impl Normalizer {
    pub fn identity(d_in: usize) -> Self {
        Normalizer {
            node_mean: vec![0.0; d_in],
            node_std: vec![1.0; d_in],
            edge_mean: vec![0.0; EDGE_DIM],
            edge_std: vec![1.0; EDGE_DIM],
        }
    }

    pub fn fit(graphs: &[DrawingGraph]) -> Self {
        let d = graphs.iter().map(DrawingGraph::feature_dim).max().unwrap_or(0);
        let nodes: Vec<f64> = graphs.iter().flat_map(|g| g.nodes.iter().flat_map(|n| n.x.iter().copied())).collect();
        let edges: Vec<f64> = graphs.iter().flat_map(|g| g.edges.iter().flat_map(|e| e.f)).collect();
        let nodes = Array2::from_shape_vec((nodes.len() / d.max(1), d), nodes).expect("uniform node width");
        let edges = Array2::from_shape_vec((edges.len() / EDGE_DIM, EDGE_DIM), edges).expect("edge width");
        let (node_mean, node_std) = column_stats(&nodes);
        let (edge_mean, edge_std) = column_stats(&edges);
        Normalizer { node_mean, node_std, edge_mean, edge_std }
    }
}
