//! Synthetic rule-labelled drawings for tests, benchmarks and the CLI demo.
//!
//! Every path belongs to one of six classes whose geometry follows a simple
//! rule: walls are long thick straight lines, doors are short arc pairs,
//! windows are small closed rectangles, dimensions are thin lines with end
//! ticks, grid lines span the sheet, everything else is a random curve.

use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{build_graph, DrawingGraph, GraphConfig, GraphError};
use crate::labels::LabelMap;
use crate::svg::{canonicalize_commands, format_path_data, write_flat_svg, NormalizedPath, StyleAttributes};

pub const SYNTH_TSV: &str = "\
# leaf_id\tname\tl1\tl2\tl3
0\tother\t0\t0\t0
1\twall\t1\t1\t1
2\tdoor\t1\t2\t2
3\twindow\t1\t2\t3
4\tdimension\t2\t3\t4
5\tgrid\t2\t4\t5
";

pub const OTHER: usize = 0;
pub const WALL: usize = 1;
pub const DOOR: usize = 2;
pub const WINDOW: usize = 3;
pub const DIMENSION: usize = 4;
pub const GRID: usize = 5;
const CLASSES: usize = 6;

pub fn synthetic_label_map() -> LabelMap {
    LabelMap::parse(SYNTH_TSV, "synthetic").expect("built-in synthetic map is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub min_paths: usize,
    pub max_paths: usize,
    /// Relative frequency of the common classes (other, wall) against each
    /// rare one. 1 draws classes uniformly.
    pub imbalance: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { min_paths: 5, max_paths: 200, imbalance: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDrawing {
    pub drawing_id: String,
    pub paths: Vec<NormalizedPath>,
    /// Leaf id per path, indexed like `paths`.
    pub leaves: Vec<usize>,
}

impl SyntheticDrawing {
    /// Flat SVG with the leaf name of every path as its `data-layer`.
    pub fn to_svg(&self) -> String {
        write_flat_svg(&self.paths, None)
    }

    /// FloorplanCAD-style markup: paths carry `semantic-id` (1-based class)
    /// inside a transformed group; background paths carry none.
    pub fn to_floorplancad_svg(&self) -> String {
        let mut out = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\">\n<g transform=\"translate(10 20) scale(0.5)\">\n");
        for (path, &leaf) in self.paths.iter().zip(&self.leaves) {
            let _ = write!(
                out,
                "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"",
                format_path_data(&path.commands),
                path.style.stroke_hex(),
                path.style.stroke_width
            );
            if let Some(class) = floorplancad_class(leaf) {
                let _ = write!(out, " semantic-id=\"{}\"", class + 1);
            }
            out.push_str("/>\n");
        }
        out.push_str("</g>\n</svg>\n");
        out
    }

    pub fn labeled_graph(&self, cfg: &GraphConfig) -> Result<DrawingGraph, GraphError> {
        let map = synthetic_label_map();
        let mut graph = build_graph(&self.drawing_id, &self.paths, cfg)?;
        for node in &mut graph.nodes {
            node.y = Some(map.map_id(self.leaves[node.id]).expect("synthetic leaves are mapped"));
        }
        Ok(graph)
    }
}

/// FloorplanCAD class of a synthetic leaf; `None` is background.
pub fn floorplancad_class(leaf: usize) -> Option<usize> {
    match leaf {
        WALL => Some(32),
        DOOR => Some(1),
        WINDOW => Some(6),
        _ => None,
    }
}

fn style(rgb: [f64; 3], width: f64) -> StyleAttributes {
    StyleAttributes { has_fill: false, stroke_rgb: rgb, stroke_width: width }
}

fn class_path(class: usize, size: f64, rng: &mut ChaCha8Rng) -> (String, StyleAttributes) {
    let x = rng.gen_range(0.0..size);
    let y = rng.gen_range(0.0..size);
    match class {
        WALL => {
            let len = rng.gen_range(0.3..0.8) * size;
            let d = if rng.gen_bool(0.5) { format!("M{x},{y} h{len}") } else { format!("M{x},{y} v{len}") };
            (d, style([0.0, 0.0, 0.0], 3.0))
        }
        DOOR => {
            let r = rng.gen_range(0.02..0.05) * size;
            let d = format!("M{x},{y} a{r},{r} 0 0 1 {r},{r} a{r},{r} 0 0 1 {r},-{r}");
            (d, style([0.6, 0.3, 0.1], 1.0))
        }
        WINDOW => {
            let w = rng.gen_range(0.03..0.06) * size;
            let h = rng.gen_range(0.005..0.015) * size;
            (format!("M{x},{y} h{w} v{h} h-{w} Z"), style([0.0, 0.3, 0.9], 1.0))
        }
        DIMENSION => {
            let len = rng.gen_range(0.1..0.3) * size;
            let t = 0.01 * size;
            let d = format!("M{x},{y} h{len} M{x},{} v{} M{},{} v{}", y - t, 2.0 * t, x + len, y - t, 2.0 * t);
            (d, style([0.0, 0.6, 0.0], 0.25))
        }
        GRID => {
            let d = if rng.gen_bool(0.5) { format!("M0,{y} H{size}") } else { format!("M{x},0 V{size}") };
            (d, style([0.5, 0.5, 0.5], 0.25))
        }
        _ => {
            let mut p = || rng.gen_range(-0.05..0.05) * size;
            let d = format!("M{x},{y} c{},{} {},{} {},{}", p(), p(), p(), p(), p(), p());
            let rgb = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            (d, style(rgb, rng.gen_range(0.1..2.0)))
        }
    }
}

/// One random drawing; deterministic in `seed`.
pub fn generate(drawing_id: &str, seed: u64, cfg: &SynthConfig) -> SyntheticDrawing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_paths..=cfg.max_paths.max(cfg.min_paths));
    let size = rng.gen_range(200.0..2000.0);
    let weights: Vec<f64> = (0..CLASSES)
        .map(|c| if c == OTHER || c == WALL { cfg.imbalance } else { 1.0 })
        .collect();
    let pick = WeightedIndex::new(&weights).expect("positive class weights");
    let map = synthetic_label_map();
    let mut paths = Vec::with_capacity(n);
    let mut leaves = Vec::with_capacity(n);
    for path_id in 0..n {
        let class = pick.sample(&mut rng);
        let (d, style) = class_path(class, size, &mut rng);
        let commands = canonicalize_commands(&d).expect("generated path data parses");
        paths.push(NormalizedPath {
            path_id,
            commands,
            style,
            source_layer: Some(map.leaves[class].name.clone()),
        });
        leaves.push(class);
    }
    SyntheticDrawing { drawing_id: drawing_id.to_string(), paths, leaves }
}

/// `n` drawings named `synth-000`, `synth-001`, ...
pub fn corpus(n: usize, seed: u64, cfg: &SynthConfig) -> Vec<SyntheticDrawing> {
    (0..n)
        .map(|i| generate(&format!("synth-{i:03}"), seed.wrapping_mul(1_000_003).wrapping_add(i as u64), cfg))
        .collect()
}
