//! Drawing graphs: node and edge features, KNN plus random edges, edge
//! filtering and the on-disk JSON format.

mod edges;
mod features;
mod io;
mod predicate;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{geometry_bounds, PathGeometry};
use crate::svg::NormalizedPath;

pub use edges::{dedup_undirected, knn_edges, random_edges};
pub use features::{
    edge_features, node_dim, node_features, node_layout, pair_features, theta_norm, tokenize_path, Frame, NodeData,
    NodeFeatureVector, EDGE_COMPONENTS, EDGE_DIM, NODE_SCALARS, PAD, TENSOR_COLS, ZERO_LENGTH,
};
pub use io::{graph_to_json, read_dataset, read_graph, round_significant, write_dataset, write_graph, LayoutEntry, Manifest};
pub use predicate::{Comparison, Predicate};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("drawing has no paths")]
    EmptyDrawing,
    #[error("bad predicate at offset {offset}: {message}")]
    BadPredicate { offset: usize, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    InvalidGraph(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    /// Nearest neighbours per node.
    pub k: usize,
    /// Random edges as a fraction of the deduplicated KNN edge count.
    pub random_fraction: f64,
    /// Rows of the command tensor.
    pub n_max: usize,
    /// Endpoint contiguity tolerance as a fraction of the bbox diagonal.
    pub contiguity_tol: f64,
    pub seed: u64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig { k: 6, random_fraction: 0.05, n_max: 32, contiguity_tol: 1e-3, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub k: usize,
    pub random_edges: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Original drawing bounds `[min-x, min-y, width, height]`.
    pub bbox: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub x: Vec<f64>,
    /// `(l1, l2, l3)` when labeled.
    pub y: Option<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub s: usize,
    pub d: usize,
    pub f: [f64; EDGE_DIM],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawingGraph {
    pub drawing_id: String,
    pub meta: GraphMeta,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl DrawingGraph {
    pub fn feature_dim(&self) -> usize {
        self.nodes.first().map_or(0, |n| n.x.len())
    }

    /// Checks ordering, uniqueness and id validity of nodes and edges.
    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |m: String| Err(GraphError::InvalidGraph(format!("{}: {m}", self.drawing_id)));
        if self.nodes.windows(2).any(|w| w[0].id >= w[1].id) {
            return bad("node ids are not strictly increasing".into());
        }
        let dim = self.feature_dim();
        if self.nodes.iter().any(|n| n.x.len() != dim) {
            return bad("node feature lengths differ".into());
        }
        if self.edges.iter().any(|e| e.s >= e.d) {
            return bad("edge with s >= d".into());
        }
        if self.edges.windows(2).any(|w| (w[0].s, w[0].d) >= (w[1].s, w[1].d)) {
            return bad("edges not sorted or duplicated".into());
        }
        let known = |id: usize| self.nodes.binary_search_by_key(&id, |n| n.id).is_ok();
        if let Some(e) = self.edges.iter().find(|e| !known(e.s) || !known(e.d)) {
            return bad(format!("edge ({}, {}) names an unknown node", e.s, e.d));
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        let index = |id: usize| self.nodes.binary_search_by_key(&id, |n| n.id).unwrap();
        for e in &self.edges {
            deg[index(e.s)] += 1;
            deg[index(e.d)] += 1;
        }
        deg
    }
}

/// Builds the featured graph of one drawing. Node order follows `path_id`.
pub fn build_graph(drawing_id: &str, paths: &[NormalizedPath], cfg: &GraphConfig) -> Result<DrawingGraph, GraphError> {
    let mut paths: Vec<&NormalizedPath> = paths.iter().collect();
    paths.sort_by_key(|p| p.path_id);
    if paths.windows(2).any(|w| w[0].path_id == w[1].path_id) {
        return Err(GraphError::InvalidGraph(format!("{drawing_id}: duplicate path ids")));
    }
    let raw: Vec<PathGeometry> = paths.par_iter().map(|p| PathGeometry::new(p)).collect();
    let bbox = geometry_bounds(&raw).ok_or(GraphError::EmptyDrawing)?;
    let frame = Frame::new(&bbox);
    let data: Vec<NodeData> = paths.par_iter().map(|p| NodeData::new(p, &frame, cfg)).collect();

    let medians: Vec<_> = data.iter().map(|d| d.median).collect();
    let knn = dedup_undirected(&knn_edges(&medians, cfg.k));
    let wanted = (cfg.random_fraction * knn.len() as f64).ceil() as usize;
    let random = random_edges(data.len(), wanted, cfg.seed, &knn);
    let mut pairs: Vec<(usize, usize, bool)> = knn.iter().map(|&(a, b)| (a, b, true)).collect();
    pairs.extend(random.iter().map(|&(a, b)| (a, b, false)));
    pairs.sort_unstable();

    let tol = frame.uniform_tolerance(cfg.contiguity_tol);
    let edges: Vec<GraphEdge> = pairs
        .par_iter()
        .map(|&(a, b, from_knn)| GraphEdge {
            s: data[a].path_id,
            d: data[b].path_id,
            f: pair_features(&data[a], &data[b], from_knn, tol),
        })
        .collect();
    let nodes = data.iter().map(|d| GraphNode { id: d.path_id, x: d.features.to_vec(), y: None }).collect();
    Ok(DrawingGraph {
        drawing_id: drawing_id.to_string(),
        meta: GraphMeta { k: cfg.k, random_edges: random.len(), n_max: cfg.n_max, seed: cfg.seed, bbox: bbox.to_array() },
        nodes,
        edges,
    })
}

/// Same nodes, only the edges whose features satisfy `keep`.
pub fn filter_edges(graph: &DrawingGraph, keep: impl Fn(&[f64; EDGE_DIM]) -> bool) -> DrawingGraph {
    DrawingGraph { edges: graph.edges.iter().filter(|e| keep(&e.f)).cloned().collect(), ..graph.clone() }
}
