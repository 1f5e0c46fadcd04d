use super::measures::OUTLINE_CURVE_STEPS;
use super::path::{PathGeometry, SampledPolyline};
use crate::point::Point;
use crate::svg::NormalizedPath;

/// Smallest Euclidean distance between any sample of `a` and any sample of `b`.
pub fn min_pairwise_distance(a: &SampledPolyline, b: &SampledPolyline) -> f64 {
    let mut best = f64::INFINITY;
    for p in &a.points {
        for q in &b.points {
            let dx = p.x - q.x;
            let dy = p.y - q.y;
            best = best.min(dx * dx + dy * dy);
        }
    }
    best.sqrt()
}

/// Crossing of chord `p1→q1` with chord `p2→q2`. Accepts when the system is
/// non-singular and both solution numerators share the determinant's sign
/// without exceeding it in magnitude, i.e. both parameters lie in `[0, 1]`.
/// Returns the two chord parameters.
fn chord_crossing(p1: Point, q1: Point, p2: Point, q2: Point) -> Option<(f64, f64)> {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p2 - p1;
    let det = d1.cross(d2);
    if det == 0.0 {
        return None;
    }
    let num_a = r.cross(d2);
    let num_b = r.cross(d1);
    let same_sign = |n: f64| n == 0.0 || (n > 0.0) == (det > 0.0);
    if !same_sign(num_a) || !same_sign(num_b) {
        return None;
    }
    if num_a.abs() > det.abs() || num_b.abs() > det.abs() {
        return None;
    }
    Some((num_a / det, num_b / det))
}

/// Number of crossing events between two sampled paths. Every chord pair is
/// tested; hits closer than the larger sampling pitch merge into one event.
pub fn count_intersections(a: &SampledPolyline, b: &SampledPolyline) -> usize {
    if a.points.len() < 2 || b.points.len() < 2 {
        return 0;
    }
    let mut hits: Vec<Point> = Vec::new();
    for wa in a.points.windows(2) {
        let (amin, amax) = chord_box(wa[0], wa[1]);
        for wb in b.points.windows(2) {
            let (bmin, bmax) = chord_box(wb[0], wb[1]);
            if amax.x < bmin.x || bmax.x < amin.x || amax.y < bmin.y || bmax.y < amin.y {
                continue;
            }
            if let Some((s, t)) = chord_crossing(wa[0], wa[1], wb[0], wb[1]) {
                let on_a = wa[0] + (wa[1] - wa[0]) * s;
                let on_b = wb[0] + (wb[1] - wb[0]) * t;
                hits.push(Point::new((on_a.x + on_b.x) * 0.5, (on_a.y + on_b.y) * 0.5));
            }
        }
    }
    cluster_count(&hits, a.spacing.max(b.spacing))
}

fn chord_box(p: Point, q: Point) -> (Point, Point) {
    (Point::new(p.x.min(q.x), p.y.min(q.y)), Point::new(p.x.max(q.x), p.y.max(q.y)))
}

/// Connected components of the "within `radius`" relation.
fn cluster_count(points: &[Point], radius: f64) -> usize {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].distance(points[j]) <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// True when some subpath endpoint of `a` lies within `tol` of some subpath
/// endpoint of `b`.
pub fn is_contiguous(a: &NormalizedPath, b: &NormalizedPath, tol: f64) -> bool {
    endpoints_touch(&PathGeometry::new(a).endpoints(), &PathGeometry::new(b).endpoints(), tol)
}

pub(crate) fn endpoints_touch(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.iter().any(|p| b.iter().any(|q| p.distance(*q) <= tol))
}

/// True when `outer` is closed and every equal-arc-length sample of `inner`
/// lies inside it (even–odd rule).
pub fn contains(outer: &NormalizedPath, inner: &NormalizedPath) -> bool {
    contains_with_samples(outer, inner, super::PAIR_SAMPLES)
}

pub fn contains_with_samples(outer: &NormalizedPath, inner: &NormalizedPath, samples: usize) -> bool {
    let outer = PathGeometry::new(outer);
    let inner = PathGeometry::new(inner).sample_equal_arclength(samples);
    geometry_contains(&outer, &inner)
}

fn geometry_contains(outer: &PathGeometry, inner: &SampledPolyline) -> bool {
    if !outer.is_closed() || inner.points.is_empty() {
        return false;
    }
    rings_contain(&outer.outline(OUTLINE_CURVE_STEPS), &inner.points)
}

/// Even–odd test of every point against a closed outline.
pub(crate) fn rings_contain(rings: &[Vec<Point>], points: &[Point]) -> bool {
    !points.is_empty() && points.iter().all(|p| point_in_rings(*p, rings))
}

fn point_in_rings(p: Point, rings: &[Vec<Point>]) -> bool {
    let mut inside = false;
    for ring in rings {
        let n = ring.len();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}
