#![allow(clippy::needless_range_loop)]
//! Helpers shared by the integration suites.
#![allow(dead_code)]

use vgraph_core::graph::{node_layout, DrawingGraph, EDGE_COMPONENTS};
use vgraph_core::svg::{AffineTransform2D, NormalizedPath};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Translations and uniform scalings: every feature must be unchanged.
    Similar,
    /// Quarter turns: positions rotate, theta shifts by the turn fraction.
    QuarterTurn(f64),
}

pub fn moved(paths: &[NormalizedPath], t: &AffineTransform2D) -> Vec<NormalizedPath> {
    paths.iter().map(|p| p.transformed(t)).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn wrapped(a: f64) -> f64 {
    let r = a.rem_euclid(1.0);
    r.min(1.0 - r)
}

/// Degree floor, canonical edge order and id validity.
pub fn structural(g: &DrawingGraph) -> Result<(), String> {
    g.validate().map_err(|e| e.to_string())?;
    let floor = g.meta.k.min(g.nodes.len().saturating_sub(1));
    match g.degrees().iter().position(|&d| d < floor) {
        Some(i) => Err(format!("{}: node {i} has degree below {floor}", g.drawing_id)),
        None => Ok(()),
    }
}

/// Compares features of a graph and the graph of the moved drawing.
pub fn same_features(a: &DrawingGraph, b: &DrawingGraph, motion: Motion, tol: f64) -> Result<(), String> {
    let pairs = |g: &DrawingGraph| g.edges.iter().map(|e| (e.s, e.d)).collect::<Vec<_>>();
    if pairs(a) != pairs(b) {
        return Err(format!("{}: edge sets differ", a.drawing_id));
    }
    let skipped: Vec<(usize, usize)> = match motion {
        Motion::Similar => vec![],
        Motion::QuarterTurn(_) => node_layout(a.meta.n_max)
            .into_iter()
            .filter(|(name, _, _)| name == "median_xy" || name == "tensor")
            .map(|(_, off, w)| (off, off + w))
            .collect(),
    };
    for (na, nb) in a.nodes.iter().zip(&b.nodes) {
        for (c, (&x, &y)) in na.x.iter().zip(&nb.x).enumerate() {
            if skipped.iter().any(|&(lo, hi)| (lo..hi).contains(&c)) {
                continue;
            }
            if !close(x, y, tol) {
                return Err(format!("{}: node {} component {c}: {x} vs {y}", a.drawing_id, na.id));
            }
        }
    }
    let theta = EDGE_COMPONENTS.iter().position(|&n| n == "theta_norm").unwrap();
    for (ea, eb) in a.edges.iter().zip(&b.edges) {
        for c in 0..ea.f.len() {
            let ok = if c == theta {
                let shift = match motion {
                    Motion::Similar => 0.0,
                    Motion::QuarterTurn(turn) => turn,
                };
                wrapped(eb.f[c] - ea.f[c] - shift) <= tol
            } else {
                close(ea.f[c], eb.f[c], tol)
            };
            if !ok {
                return Err(format!(
                    "{}: edge ({}, {}) {}: {} vs {}",
                    a.drawing_id, ea.s, ea.d, EDGE_COMPONENTS[c], ea.f[c], eb.f[c]
                ));
            }
        }
    }
    Ok(())
}
