//! Numeric geometry over normalized paths: arc-length sampling, length and
//! area, curvature, median point and pairwise relations.

pub mod arc;
mod measures;
mod pairwise;
mod path;
pub mod segment;

pub use measures::{
    curvature_profile, geometry_area, geometry_curvature_profile, median_point, path_area, path_length,
    three_point_curvature, CurvatureProfile, OUTLINE_CURVE_STEPS,
};
pub use pairwise::{contains, contains_with_samples, count_intersections, is_contiguous, min_pairwise_distance};
pub(crate) use pairwise::{endpoints_touch, rings_contain};
pub use path::{sample_equal_arclength, PathGeometry, SampledPolyline, Subpath};

use crate::point::Point;
use crate::svg::NormalizedPath;

/// Samples per path for distances, intersections and containment.
pub const PAIR_SAMPLES: usize = 64;
/// Curvature intervals per path.
pub const CURVATURE_INTERVALS: usize = 16;
/// Samples per path for the median point.
pub const NODE_SAMPLES: usize = 64;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub(crate) fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    /// `[min-x, min-y, width, height]`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.min.x, self.min.y, self.width(), self.height()]
    }
}

/// Exact bounds of the drawn geometry (curve extrema included).
pub fn geometry_bounds<'a>(geoms: impl IntoIterator<Item = &'a PathGeometry>) -> Option<BoundingBox> {
    let mut bb: Option<BoundingBox> = None;
    let mut add = |p: Point| match bb.as_mut() {
        Some(b) => b.include(p),
        None => bb = Some(BoundingBox { min: p, max: p }),
    };
    for g in geoms {
        for sp in &g.subpaths {
            add(sp.start);
        }
        for seg in g.segments() {
            add(seg.end());
            for t in seg.extremal_params() {
                add(seg.eval(t));
            }
        }
    }
    bb
}

pub fn bounding_box(paths: &[NormalizedPath]) -> Option<BoundingBox> {
    let geoms: Vec<PathGeometry> = paths.iter().map(PathGeometry::new).collect();
    geometry_bounds(&geoms)
}
