use super::path::{PathGeometry, SampledPolyline};
use crate::point::Point;
use crate::svg::NormalizedPath;

/// Parameter steps per curved segment when building area/containment outlines.
pub const OUTLINE_CURVE_STEPS: usize = 256;

pub fn path_length(path: &NormalizedPath) -> f64 {
    PathGeometry::new(path).length()
}

/// Enclosed area of a closed path (sum over subpaths of the absolute
/// shoelace area); `None` for open paths.
pub fn path_area(path: &NormalizedPath) -> Option<f64> {
    geometry_area(&PathGeometry::new(path))
}

pub fn geometry_area(geom: &PathGeometry) -> Option<f64> {
    if !geom.is_closed() {
        return None;
    }
    Some(geom.outline(OUTLINE_CURVE_STEPS).iter().map(|ring| shoelace(ring).abs()).sum())
}

pub(crate) fn shoelace(ring: &[Point]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..ring.len() {
        let p = ring[i];
        let q = ring[(i + 1) % ring.len()];
        acc += p.cross(q);
    }
    acc * 0.5
}

/// Finite-difference curvature from three consecutive points, where `p1` is
/// the current point and `p0`, `p2` its predecessor and successor. Signed;
/// zero when `p0` and `p1` coincide.
pub fn three_point_curvature(p0: Point, p1: Point, p2: Point) -> f64 {
    let (dx0, dy0) = (p0.x - p1.x, p0.y - p1.y);
    let (dx2, dy2) = (p2.x - p1.x, p2.y - p1.y);
    let cross = dx0 * dy2 - dy0 * dx2;
    let denominator = (dx0 * dx0 + dy0 * dy0).powi(3).sqrt();
    // Below this bound the cross product is indistinguishable from rounding
    // in the coordinate differences, so the points count as collinear.
    let magnitude = [p0, p1, p2].iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
    let noise = 32.0 * f64::EPSILON * magnitude * (dx0.hypot(dy0) + dx2.hypot(dy2));
    let numerator = 2.0 * cross;
    if denominator == 0.0 || cross.abs() <= noise {
        0.0
    } else {
        numerator / denominator
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub samples: Vec<f64>,
    pub t_values: Vec<f64>,
    pub n_intervals: usize,
    pub dt: f64,
}

impl CurvatureProfile {
    /// `(mean, min, max, mean |κ|)`.
    pub fn stats(&self) -> [f64; 4] {
        if self.samples.is_empty() {
            return [0.0; 4];
        }
        let n = self.samples.len() as f64;
        let mean = self.samples.iter().sum::<f64>() / n;
        let min = self.samples.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean_abs = self.samples.iter().map(|k| k.abs()).sum::<f64>() / n;
        [mean, min, max, mean_abs]
    }
}

/// Curvature at `t = Δt, 2Δt, …, 1` with `Δt = 1/n`, where `p(t)` is the
/// point at arc-length fraction `t`. Neighbours outside `[0, 1]` are clamped.
pub fn curvature_profile(path: &NormalizedPath, n: usize) -> CurvatureProfile {
    geometry_curvature_profile(&PathGeometry::new(path), n)
}

pub fn geometry_curvature_profile(geom: &PathGeometry, n: usize) -> CurvatureProfile {
    let n = n.max(1);
    let dt = 1.0 / n as f64;
    let total = geom.length();
    let at = |t: f64| geom.point_at_length(t.clamp(0.0, 1.0) * total);
    let mut samples = Vec::with_capacity(n);
    let mut t_values = Vec::with_capacity(n);
    for k in 1..=n {
        let t = k as f64 * dt;
        t_values.push(t);
        let kappa = if total > 0.0 { three_point_curvature(at(t - dt), at(t), at(t + dt)) } else { 0.0 };
        samples.push(kappa);
    }
    CurvatureProfile { samples, t_values, n_intervals: n, dt }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Coordinate-wise median of the samples.
pub fn median_point(poly: &SampledPolyline) -> Point {
    if poly.points.is_empty() {
        return Point::ORIGIN;
    }
    let mut xs: Vec<f64> = poly.points.iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = poly.points.iter().map(|p| p.y).collect();
    Point::new(median(&mut xs), median(&mut ys))
}
