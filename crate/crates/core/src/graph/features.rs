use serde::{Deserialize, Serialize};

use super::GraphConfig;
use crate::geometry::{
    endpoints_touch, geometry_area, geometry_curvature_profile, median_point, rings_contain, BoundingBox,
    PathGeometry, SampledPolyline, CURVATURE_INTERVALS, NODE_SAMPLES, OUTLINE_CURVE_STEPS,
};
use crate::geometry::{count_intersections, min_pairwise_distance};
use crate::point::Point;
use crate::svg::{AffineTransform2D, NormalizedPath, PathCommand, StyleAttributes};

/// Columns per command row: kind index plus 7 parameter slots.
pub const TENSOR_COLS: usize = 8;
/// Scalar node components ahead of the flattened tensor.
pub const NODE_SCALARS: usize = 15;
pub const EDGE_DIM: usize = 10;
pub const PAD: f64 = -1.0;
/// Stand-in for a zero path length in the length ratios.
pub const ZERO_LENGTH: f64 = 1e-9;

/// Node components and their widths; the tensor width depends on `n_max`.
const NODE_COMPONENTS: [(&str, usize); 10] = [
    ("has_fill", 1),
    ("stroke_rgb", 3),
    ("stroke_width", 1),
    ("is_closed", 1),
    ("log_area", 1),
    ("log_length", 1),
    ("command_count", 1),
    ("curvature_stats", 4),
    ("median_xy", 2),
    ("tensor", 0),
];

pub const EDGE_COMPONENTS: [&str; EDGE_DIM] = [
    "same_length",
    "from_knn",
    "log_length_ratio",
    "inv_length_ratio",
    "theta_norm",
    "log_min_dist",
    "containment",
    "intersection_count",
    "same_style",
    "contiguous",
];

pub fn node_dim(n_max: usize) -> usize {
    NODE_SCALARS + TENSOR_COLS * n_max
}

/// `(name, offset, width)` for every node component.
pub fn node_layout(n_max: usize) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (name, width) in NODE_COMPONENTS {
        let width = if name == "tensor" { TENSOR_COLS * n_max } else { width };
        out.push((name.to_string(), offset, width));
        offset += width;
    }
    out
}

/// Drawing-level normalization. `uniform` maps the bbox minimum to the origin
/// and the longest side to 1; per-axis coordinates map the bbox onto `[0,1]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub min: Point,
    pub width: f64,
    pub height: f64,
    pub longest: f64,
    /// Diagonal of the unmodified bbox.
    pub diagonal: f64,
}

impl Frame {
    /// Zero-extent sides borrow the longest side (or 1 for a single point).
    pub fn new(bbox: &BoundingBox) -> Self {
        let longest = bbox.width().max(bbox.height());
        let longest = if longest > 0.0 { longest } else { 1.0 };
        let side = |v: f64| if v > 0.0 { v } else { longest };
        Frame {
            min: bbox.min,
            width: side(bbox.width()),
            height: side(bbox.height()),
            longest,
            diagonal: bbox.diagonal(),
        }
    }

    pub fn uniform(&self) -> AffineTransform2D {
        let s = 1.0 / self.longest;
        AffineTransform2D::new(s, 0.0, 0.0, s, -self.min.x * s, -self.min.y * s)
    }

    pub fn per_axis(&self, p: Point) -> Point {
        Point::new((p.x - self.min.x) / self.width, (p.y - self.min.y) / self.height)
    }

    /// Per-axis coordinates of a point given in the uniform frame.
    fn uniform_to_axis(&self, u: Point) -> Point {
        Point::new(u.x * self.longest / self.width, u.y * self.longest / self.height)
    }

    /// A fraction of the bbox diagonal, expressed in the uniform frame.
    pub fn uniform_tolerance(&self, fraction: f64) -> f64 {
        fraction * self.diagonal / self.longest
    }
}

/// Fixed-layout per-node features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFeatureVector {
    pub has_fill: f64,
    pub stroke_rgb: [f64; 3],
    pub stroke_width: f64,
    pub is_closed: f64,
    pub log_area: f64,
    pub log_length: f64,
    pub command_count: f64,
    pub curvature_stats: [f64; 4],
    pub median_xy: [f64; 2],
    pub tensor: Vec<f64>,
}

impl NodeFeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(NODE_SCALARS + self.tensor.len());
        v.push(self.has_fill);
        v.extend_from_slice(&self.stroke_rgb);
        v.push(self.stroke_width);
        v.push(self.is_closed);
        v.push(self.log_area);
        v.push(self.log_length);
        v.push(self.command_count);
        v.extend_from_slice(&self.curvature_stats);
        v.extend_from_slice(&self.median_xy);
        v.extend_from_slice(&self.tensor);
        v
    }
}

/// `n_max × 8` command encoding, flattened row-major.
pub fn tokenize_path(path: &NormalizedPath, n_max: usize, frame: &Frame) -> Vec<f64> {
    let mut out = vec![PAD; n_max * TENSOR_COLS];
    for (row, cmd) in path.commands.iter().take(n_max).enumerate() {
        let cells = &mut out[row * TENSOR_COLS..(row + 1) * TENSOR_COLS];
        cells[0] = cmd.kind().index() as f64;
        let params: Vec<f64> = match *cmd {
            PathCommand::ArcTo { rx, ry, x_axis_rotation, large_arc, sweep, to } => {
                let p = frame.per_axis(to);
                vec![
                    rx / frame.longest,
                    ry / frame.longest,
                    x_axis_rotation / 360.0,
                    f64::from(u8::from(large_arc)),
                    f64::from(u8::from(sweep)),
                    p.x,
                    p.y,
                ]
            }
            _ => cmd
                .params()
                .chunks(2)
                .flat_map(|xy| {
                    let p = frame.per_axis(Point::new(xy[0], xy[1]));
                    [p.x, p.y]
                })
                .collect(),
        };
        cells[1..1 + params.len()].copy_from_slice(&params);
    }
    out
}

/// Everything about one path needed for node and edge features, computed
/// once in the drawing's uniform frame.
#[derive(Debug, Clone)]
pub struct NodeData {
    pub path_id: usize,
    pub style: StyleAttributes,
    pub length: f64,
    /// Median point in the uniform frame.
    pub median: Point,
    pub samples: SampledPolyline,
    pub endpoints: Vec<Point>,
    /// Closed outline, present only for closed paths.
    pub rings: Option<Vec<Vec<Point>>>,
    pub features: NodeFeatureVector,
}

impl NodeData {
    pub fn new(path: &NormalizedPath, frame: &Frame, cfg: &GraphConfig) -> Self {
        let geom = PathGeometry::new(&path.transformed(&frame.uniform()));
        let length = geom.length();
        let samples = geom.sample_equal_arclength(NODE_SAMPLES);
        let median = median_point(&samples);
        let closed = geom.is_closed();
        let area = geometry_area(&geom).unwrap_or(0.0);
        let kappa = geometry_curvature_profile(&geom, CURVATURE_INTERVALS).stats();
        let median_xy = frame.uniform_to_axis(median);
        let style = path.style;
        let features = NodeFeatureVector {
            has_fill: f64::from(u8::from(style.has_fill)),
            stroke_rgb: style.stroke_rgb,
            stroke_width: style.stroke_width,
            is_closed: f64::from(u8::from(closed)),
            log_area: area.ln_1p(),
            log_length: length.ln_1p(),
            command_count: path.commands.len() as f64,
            curvature_stats: kappa,
            median_xy: [median_xy.x, median_xy.y],
            tensor: tokenize_path(path, cfg.n_max, frame),
        };
        NodeData {
            path_id: path.path_id,
            style,
            length,
            median,
            endpoints: geom.endpoints(),
            rings: closed.then(|| geom.outline(OUTLINE_CURVE_STEPS)),
            samples,
            features,
        }
    }
}

pub fn node_features(path: &NormalizedPath, bbox: &BoundingBox, cfg: &GraphConfig) -> NodeFeatureVector {
    NodeData::new(path, &Frame::new(bbox), cfg).features
}

/// Angle of `a − b` as a fraction of a full turn, in `[0, 1)`.
pub fn theta_norm(a: Point, b: Point) -> f64 {
    let deg = (a.y - b.y).atan2(a.x - b.x).to_degrees().rem_euclid(360.0);
    let t = deg / 360.0;
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Ten-component descriptor of the pair `(a, b)`, `a` being the lower id.
pub fn pair_features(a: &NodeData, b: &NodeData, from_knn: bool, tol: f64) -> [f64; EDGE_DIM] {
    let guard = |node: &NodeData| {
        if node.length > 0.0 {
            node.length
        } else {
            log::warn!("path {} has zero length; using {ZERO_LENGTH} in length ratios", node.path_id);
            ZERO_LENGTH
        }
    };
    let (la, lb) = (guard(a), guard(b));
    let same_length = (a.length - b.length).abs() <= 1e-6 * a.length.max(b.length);
    let inside = |outer: &NodeData, inner: &NodeData| {
        outer.rings.as_ref().is_some_and(|r| rings_contain(r, &inner.samples.points))
    };
    let flag = |b: bool| f64::from(u8::from(b));
    [
        flag(same_length),
        flag(from_knn),
        (la / lb).ln(),
        lb / la,
        theta_norm(a.median, b.median),
        min_pairwise_distance(&a.samples, &b.samples).ln_1p(),
        flag(inside(a, b) || inside(b, a)),
        count_intersections(&a.samples, &b.samples) as f64,
        flag(a.style == b.style),
        flag(endpoints_touch(&a.endpoints, &b.endpoints, tol)),
    ]
}

/// Edge features of two standalone paths within the given drawing bounds.
pub fn edge_features(
    a: &NormalizedPath,
    b: &NormalizedPath,
    from_knn: bool,
    bbox: &BoundingBox,
    cfg: &GraphConfig,
) -> [f64; EDGE_DIM] {
    let frame = Frame::new(bbox);
    let (na, nb) = (NodeData::new(a, &frame, cfg), NodeData::new(b, &frame, cfg));
    pair_features(&na, &nb, from_knn, frame.uniform_tolerance(cfg.contiguity_tol))
}
