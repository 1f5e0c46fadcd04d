use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{node_layout, DrawingGraph, GraphError, EDGE_COMPONENTS};

const SIGNIFICANT_DIGITS: usize = 9;
pub const MANIFEST_NAME: &str = "manifest.json";

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn rounded(graph: &DrawingGraph) -> DrawingGraph {
    let mut g = graph.clone();
    for v in g.meta.bbox.iter_mut() {
        *v = round_significant(*v);
    }
    for n in &mut g.nodes {
        n.x.iter_mut().for_each(|v| *v = round_significant(*v));
    }
    for e in &mut g.edges {
        e.f.iter_mut().for_each(|v| *v = round_significant(*v));
    }
    g
}

/// Canonical serialized form: validated, reals at 9 significant digits.
pub fn graph_to_json(graph: &DrawingGraph) -> Result<String, GraphError> {
    graph.validate()?;
    Ok(serde_json::to_string(&rounded(graph))?)
}

pub fn write_graph(path: &Path, graph: &DrawingGraph) -> Result<(), GraphError> {
    fs::write(path, graph_to_json(graph)? + "\n")?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<DrawingGraph, GraphError> {
    let graph: DrawingGraph = serde_json::from_str(&fs::read_to_string(path)?)?;
    graph.validate()?;
    Ok(graph)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub name: String,
    pub offset: usize,
    pub width: usize,
}

/// Dataset directory index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<String>,
    pub n_max: usize,
    pub node_layout: Vec<LayoutEntry>,
    pub edge_layout: Vec<LayoutEntry>,
}

impl Manifest {
    pub fn new(files: Vec<String>, n_max: usize) -> Self {
        let node_layout =
            node_layout(n_max).into_iter().map(|(name, offset, width)| LayoutEntry { name, offset, width }).collect();
        let edge_layout = EDGE_COMPONENTS
            .iter()
            .enumerate()
            .map(|(offset, name)| LayoutEntry { name: name.to_string(), offset, width: 1 })
            .collect();
        Manifest { files, n_max, node_layout, edge_layout }
    }
}

fn file_name(drawing_id: &str) -> String {
    let safe: String =
        drawing_id.chars().map(|c| if c.is_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect();
    format!("{safe}.json")
}

/// Writes one file per graph plus the manifest; files are listed sorted.
pub fn write_dataset(dir: &Path, graphs: &[DrawingGraph], n_max: usize) -> Result<Manifest, GraphError> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(graphs.len());
    for g in graphs {
        let name = file_name(&g.drawing_id);
        if files.contains(&name) {
            return Err(GraphError::InvalidGraph(format!("two drawings map to file {name}")));
        }
        write_graph(&dir.join(&name), g)?;
        files.push(name);
    }
    files.sort();
    let manifest = Manifest::new(files, n_max);
    fs::write(dir.join(MANIFEST_NAME), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

/// Loads every graph listed in the manifest, sorted by drawing id.
pub fn read_dataset(dir: &Path) -> Result<(Manifest, Vec<DrawingGraph>), GraphError> {
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_NAME))?)?;
    let mut graphs = manifest.files.iter().map(|f| read_graph(&dir.join(f))).collect::<Result<Vec<_>, _>>()?;
    graphs.sort_by(|a, b| a.drawing_id.cmp(&b.drawing_id));
    let dim = super::node_dim(manifest.n_max);
    if let Some(g) = graphs.iter().find(|g| !g.nodes.is_empty() && g.feature_dim() != dim) {
        return Err(GraphError::InvalidGraph(format!(
            "{}: node features have {} components, manifest implies {dim}",
            g.drawing_id,
            g.feature_dim()
        )));
    }
    Ok((manifest, graphs))
}
