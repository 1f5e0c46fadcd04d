use super::arc::endpoint_to_center;
use super::segment::Segment;
use crate::point::Point;
use crate::svg::{NormalizedPath, PathCommand};

/// Relative tolerance under which an unclosed subpath whose end meets its
/// start still counts as closed.
const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Subpath {
    pub start: Point,
    pub segments: Vec<Segment>,
    pub explicitly_closed: bool,
}

impl Subpath {
    pub fn end(&self) -> Point {
        self.segments.last().map_or(self.start, Segment::end)
    }

    pub fn is_closed(&self) -> bool {
        if self.segments.is_empty() {
            return false;
        }
        if self.explicitly_closed {
            return true;
        }
        let scale = 1.0 + self.start.x.abs().max(self.start.y.abs());
        self.start.distance(self.end()) <= CLOSURE_TOLERANCE * scale
    }
}

/// Segment decomposition of a path with cumulative arc lengths.
#[derive(Debug, Clone)]
pub struct PathGeometry {
    pub subpaths: Vec<Subpath>,
    segments: Vec<Segment>,
    lengths: Vec<f64>,
    total: f64,
}

impl PathGeometry {
    pub fn new(path: &NormalizedPath) -> Self {
        Self::from_commands(&path.commands)
    }

    pub fn from_commands(commands: &[PathCommand]) -> Self {
        let mut subpaths: Vec<Subpath> = Vec::new();
        let mut current = Point::ORIGIN;
        for cmd in commands {
            let seg = match *cmd {
                PathCommand::MoveTo(p) => {
                    subpaths.push(Subpath { start: p, segments: vec![], explicitly_closed: false });
                    current = p;
                    continue;
                }
                PathCommand::LineTo(p) => Segment::Line(current, p),
                PathCommand::CubicTo(c1, c2, p) => Segment::Cubic(current, c1, c2, p),
                PathCommand::QuadTo(c, p) => Segment::Quad(current, c, p),
                PathCommand::ArcTo { rx, ry, x_axis_rotation, large_arc, sweep, to } => {
                    match endpoint_to_center(current, to, rx, ry, x_axis_rotation, large_arc, sweep) {
                        Some(arc) => Segment::Arc(arc),
                        None => Segment::Line(current, to),
                    }
                }
                PathCommand::Close => {
                    if let Some(sp) = subpaths.last_mut() {
                        if current != sp.start {
                            sp.segments.push(Segment::Line(current, sp.start));
                        }
                        sp.explicitly_closed = true;
                        current = sp.start;
                    }
                    continue;
                }
            };
            if subpaths.is_empty() {
                subpaths.push(Subpath { start: current, segments: vec![], explicitly_closed: false });
            }
            subpaths.last_mut().expect("subpath exists").segments.push(seg);
            current = seg.end();
        }
        let segments: Vec<Segment> = subpaths.iter().flat_map(|s| s.segments.iter().copied()).collect();
        let lengths: Vec<f64> = segments.iter().map(Segment::length).collect();
        let total = lengths.iter().sum();
        PathGeometry { subpaths, segments, lengths, total }
    }

    pub fn length(&self) -> f64 {
        self.total
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Option<Point> {
        self.subpaths.first().map(|s| s.start)
    }

    pub fn end(&self) -> Option<Point> {
        self.subpaths.last().map(Subpath::end)
    }

    /// Closed when every subpath is closed (by `Z` or coincident endpoints).
    pub fn is_closed(&self) -> bool {
        !self.subpaths.is_empty() && self.subpaths.iter().all(Subpath::is_closed)
    }

    /// First and last point of every subpath.
    pub fn endpoints(&self) -> Vec<Point> {
        self.subpaths.iter().flat_map(|s| [s.start, s.end()]).collect()
    }

    /// Point at arc length `s` from the path start, drawn length only
    /// (jumps between subpaths do not count).
    pub fn point_at_length(&self, s: f64) -> Point {
        let Some(first) = self.start() else {
            return Point::ORIGIN;
        };
        if self.segments.is_empty() || s <= 0.0 {
            return first;
        }
        let mut remaining = s;
        for (seg, &len) in self.segments.iter().zip(&self.lengths) {
            if remaining <= len {
                return seg.eval(seg.param_at_length(remaining, len));
            }
            remaining -= len;
        }
        self.segments.last().map_or(first, Segment::end)
    }

    /// `n` points equally spaced in arc length; the last one is the path end.
    pub fn sample_equal_arclength(&self, n: usize) -> SampledPolyline {
        let n = n.max(1);
        let start = self.start().unwrap_or(Point::ORIGIN);
        if self.total <= 0.0 {
            return SampledPolyline { points: vec![start; n], spacing: 0.0, closed: self.is_closed() };
        }
        let spacing = if n > 1 { self.total / (n - 1) as f64 } else { 0.0 };
        let mut points = Vec::with_capacity(n);
        let mut seg_index = 0;
        let mut seg_offset = 0.0;
        for i in 0..n {
            if i + 1 == n && n > 1 {
                points.push(self.segments.last().map_or(start, Segment::end));
                break;
            }
            let target = spacing * i as f64;
            while seg_index + 1 < self.segments.len() && target > seg_offset + self.lengths[seg_index] {
                seg_offset += self.lengths[seg_index];
                seg_index += 1;
            }
            let seg = &self.segments[seg_index];
            let len = self.lengths[seg_index];
            points.push(seg.eval(seg.param_at_length(target - seg_offset, len)));
        }
        SampledPolyline { points, spacing, closed: self.is_closed() }
    }

    /// Polygonal outline of each subpath: exact vertices for straight
    /// segments, `curve_steps` parameter steps per curved segment.
    pub fn outline(&self, curve_steps: usize) -> Vec<Vec<Point>> {
        self.subpaths
            .iter()
            .map(|sp| {
                let mut ring = vec![sp.start];
                for seg in &sp.segments {
                    if seg.is_straight() {
                        ring.push(seg.end());
                    } else {
                        ring.extend((1..=curve_steps).map(|k| seg.eval(k as f64 / curve_steps as f64)));
                    }
                }
                ring
            })
            .collect()
    }
}

/// Equal arc-length samples of a path.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPolyline {
    pub points: Vec<Point>,
    /// Arc-length step between consecutive samples.
    pub spacing: f64,
    pub closed: bool,
}

/// Samples `path` at `n ≥ 2` equally spaced arc-length positions.
pub fn sample_equal_arclength(path: &NormalizedPath, n: usize) -> SampledPolyline {
    PathGeometry::new(path).sample_equal_arclength(n)
}
