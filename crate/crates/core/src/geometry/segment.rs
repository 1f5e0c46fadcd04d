//! Parametric segments and arc-length machinery.

use super::arc::CenterArc;
use crate::point::Point;

/// Relative tolerance of the adaptive arc-length quadrature.
const QUADRATURE_TOLERANCE: f64 = 1e-10;
const MAX_DEPTH: u32 = 24;

// 5-point Gauss–Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line(Point, Point),
    Quad(Point, Point, Point),
    Cubic(Point, Point, Point, Point),
    Arc(CenterArc),
}

impl Segment {
    pub fn start(&self) -> Point {
        self.eval(0.0)
    }

    pub fn end(&self) -> Point {
        match *self {
            Segment::Line(_, p) | Segment::Quad(_, _, p) | Segment::Cubic(_, _, _, p) => p,
            Segment::Arc(a) => a.eval(1.0),
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(self, Segment::Line(..))
    }

    /// Position at parameter `t ∈ [0, 1]` (De Casteljau for Béziers).
    pub fn eval(&self, t: f64) -> Point {
        match *self {
            Segment::Line(p0, p1) => p0.lerp(p1, t),
            Segment::Quad(p0, c, p1) => {
                let a = p0.lerp(c, t);
                let b = c.lerp(p1, t);
                a.lerp(b, t)
            }
            Segment::Cubic(p0, c1, c2, p1) => {
                let a = p0.lerp(c1, t);
                let b = c1.lerp(c2, t);
                let c = c2.lerp(p1, t);
                let ab = a.lerp(b, t);
                let bc = b.lerp(c, t);
                ab.lerp(bc, t)
            }
            Segment::Arc(a) => a.eval(t),
        }
    }

    pub fn derivative(&self, t: f64) -> Point {
        match *self {
            Segment::Line(p0, p1) => p1 - p0,
            Segment::Quad(p0, c, p1) => ((c - p0) * (1.0 - t) + (p1 - c) * t) * 2.0,
            Segment::Cubic(p0, c1, c2, p1) => {
                let u = 1.0 - t;
                ((c1 - p0) * (u * u) + (c2 - c1) * (2.0 * u * t) + (p1 - c2) * (t * t)) * 3.0
            }
            Segment::Arc(a) => a.derivative(t),
        }
    }

    fn speed(&self, t: f64) -> f64 {
        self.derivative(t).norm()
    }

    fn gauss(&self, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        GL_NODES
            .iter()
            .zip(GL_WEIGHTS.iter())
            .map(|(x, w)| w * self.speed(mid + half * x))
            .sum::<f64>()
            * half
    }

    fn adaptive(&self, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = self.gauss(a, m);
        let right = self.gauss(m, b);
        let refined = left + right;
        if depth >= MAX_DEPTH || (refined - whole).abs() <= QUADRATURE_TOLERANCE * refined.abs().max(1e-300) {
            return refined;
        }
        self.adaptive(a, m, left, depth + 1) + self.adaptive(m, b, right, depth + 1)
    }

    /// Arc length between two parameter values.
    pub fn length_between(&self, t0: f64, t1: f64) -> f64 {
        if t1 <= t0 {
            return 0.0;
        }
        match *self {
            Segment::Line(p0, p1) => p0.distance(p1) * (t1 - t0),
            Segment::Arc(a) if a.rx == a.ry => a.rx * a.theta_sweep.abs() * (t1 - t0),
            _ => {
                // Split at the quarter points first so short features are not missed.
                let mut total = 0.0;
                let steps = 4;
                for i in 0..steps {
                    let a = t0 + (t1 - t0) * i as f64 / steps as f64;
                    let b = t0 + (t1 - t0) * (i + 1) as f64 / steps as f64;
                    total += self.adaptive(a, b, self.gauss(a, b), 0);
                }
                total
            }
        }
    }

    pub fn length(&self) -> f64 {
        self.length_between(0.0, 1.0)
    }

    /// Parameter at which the arc length from the segment start equals `s`.
    /// `total` is the full segment length.
    pub fn param_at_length(&self, s: f64, total: f64) -> f64 {
        if total <= 0.0 || s <= 0.0 {
            return 0.0;
        }
        if s >= total {
            return 1.0;
        }
        match *self {
            Segment::Line(..) => s / total,
            Segment::Arc(a) if a.rx == a.ry => s / total,
            _ => {
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                let mut t = s / total;
                for _ in 0..60 {
                    let f = self.length_between(0.0, t) - s;
                    if f.abs() <= 1e-13 * total {
                        break;
                    }
                    if f > 0.0 {
                        hi = t;
                    } else {
                        lo = t;
                    }
                    let d = self.speed(t);
                    let newton = t - f / d;
                    t = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                t
            }
        }
    }

    /// Parameter values in `(0, 1)` where the x or y coordinate is extremal.
    pub fn extremal_params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match *self {
            Segment::Line(..) => {}
            Segment::Quad(p0, c, p1) => {
                for (a, b, e) in [(p0.x, c.x, p1.x), (p0.y, c.y, p1.y)] {
                    let den = a - 2.0 * b + e;
                    if den != 0.0 {
                        out.push((a - b) / den);
                    }
                }
            }
            Segment::Cubic(p0, c1, c2, p1) => {
                for (a, b, c, d) in [(p0.x, c1.x, c2.x, p1.x), (p0.y, c1.y, c2.y, p1.y)] {
                    // Derivative / 3: (b-a)(1-t)^2 + 2(c-b)(1-t)t + (d-c)t^2
                    let qa = (b - a) - 2.0 * (c - b) + (d - c);
                    let qb = 2.0 * ((c - b) - (b - a));
                    let qc = b - a;
                    out.extend(quadratic_roots(qa, qb, qc));
                }
            }
            Segment::Arc(a) => {
                let (sp, cp) = a.phi.sin_cos();
                let base = [(-a.ry * sp).atan2(a.rx * cp), (a.ry * cp).atan2(a.rx * sp)];
                for b in base {
                    for k in -3..=3 {
                        let theta = b + k as f64 * std::f64::consts::PI;
                        let t = (theta - a.theta_start) / a.theta_sweep;
                        out.push(t);
                    }
                }
            }
        }
        out.retain(|t| *t > 0.0 && *t < 1.0);
        out
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-14 * (b.abs() + c.abs()).max(1e-300) {
        return if b != 0.0 { vec![-c / b] } else { vec![] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    vec![(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)]
}
