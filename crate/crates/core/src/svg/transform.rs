use serde::{Deserialize, Serialize};

use super::SvgError;
use crate::point::Point;

/// 2D affine map `x' = a·x + c·y + e`, `y' = b·x + d·y + f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform2D {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Default for AffineTransform2D {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl AffineTransform2D {
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        AffineTransform2D { a, b, c, d, e, f }
    }

    pub fn translate(tx: f64, ty: f64) -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0, tx, ty)
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Self::new(sx, 0.0, 0.0, sy, 0.0, 0.0)
    }

    /// Counter-clockwise rotation in the y-up sense (clockwise on screen), angle in degrees.
    pub fn rotate_degrees(angle: f64) -> Self {
        let (s, c) = angle.to_radians().sin_cos();
        Self::new(c, s, -s, c, 0.0, 0.0)
    }

    pub fn skew_x_degrees(angle: f64) -> Self {
        Self::new(1.0, 0.0, angle.to_radians().tan(), 1.0, 0.0, 0.0)
    }

    pub fn skew_y_degrees(angle: f64) -> Self {
        Self::new(1.0, angle.to_radians().tan(), 0.0, 1.0, 0.0, 0.0)
    }

    /// `self ∘ inner`: applies `inner` first, then `self`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(
            self.a * inner.a + self.c * inner.b,
            self.b * inner.a + self.d * inner.b,
            self.a * inner.c + self.c * inner.d,
            self.b * inner.c + self.d * inner.d,
            self.a * inner.e + self.c * inner.f + self.e,
            self.b * inner.e + self.d * inner.f + self.f,
        )
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.a * p.x + self.c * p.y + self.e,
            self.b * p.x + self.d * p.y + self.f,
        )
    }

    /// Applies only the linear part (for displacements).
    pub fn apply_vector(&self, v: Point) -> Point {
        Point::new(self.a * v.x + self.c * v.y, self.b * v.x + self.d * v.y)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn inverse(&self) -> Result<Self, SvgError> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(SvgError::NonInvertibleTransform);
        }
        let inv = 1.0 / det;
        let a = self.d * inv;
        let b = -self.b * inv;
        let c = -self.c * inv;
        let d = self.a * inv;
        Ok(Self::new(
            a,
            b,
            c,
            d,
            -(a * self.e + c * self.f),
            -(b * self.e + d * self.f),
        ))
    }

    /// Parses an SVG `transform` attribute (a list of transform functions,
    /// composed left to right).
    pub fn parse(text: &str) -> Result<Self, SvgError> {
        let mut result = Self::IDENTITY;
        let mut rest = text.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| SvgError::UnsupportedTransformKind(rest.trim().to_string()))?;
            let name = rest[..open].trim();
            let close = rest[open..]
                .find(')')
                .map(|i| i + open)
                .ok_or_else(|| SvgError::UnsupportedTransformKind(rest.trim().to_string()))?;
            let args = parse_number_list(&rest[open + 1..close])
                .ok_or_else(|| SvgError::UnsupportedTransformKind(rest[..=close].to_string()))?;
            let bad = || SvgError::UnsupportedTransformKind(format!("{name}({})", &rest[open + 1..close]));
            let next = match (name, args.as_slice()) {
                ("matrix", [a, b, c, d, e, f]) => Self::new(*a, *b, *c, *d, *e, *f),
                ("translate", [tx]) => Self::translate(*tx, 0.0),
                ("translate", [tx, ty]) => Self::translate(*tx, *ty),
                ("scale", [s]) => Self::scale(*s, *s),
                ("scale", [sx, sy]) => Self::scale(*sx, *sy),
                ("rotate", [angle]) => Self::rotate_degrees(*angle),
                ("rotate", [angle, cx, cy]) => Self::translate(*cx, *cy)
                    .compose(&Self::rotate_degrees(*angle))
                    .compose(&Self::translate(-cx, -cy)),
                ("skewX", [angle]) => Self::skew_x_degrees(*angle),
                ("skewY", [angle]) => Self::skew_y_degrees(*angle),
                _ => return Err(bad()),
            };
            result = result.compose(&next);
            rest = rest[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        }
        Ok(result)
    }
}

fn parse_number_list(text: &str) -> Option<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: Point, q: Point) -> bool {
        p.distance(q) < 1e-12
    }

    #[test]
    fn compose_applies_inner_first() {
        let outer = AffineTransform2D::scale(2.0, 2.0);
        let inner = AffineTransform2D::translate(1.0, 0.0);
        assert!(close(outer.compose(&inner).apply(Point::new(1.0, 1.0)), Point::new(4.0, 2.0)));
    }

    #[test]
    fn parse_list_composes_left_to_right() {
        let t = AffineTransform2D::parse("scale(2) translate(1, 0)").unwrap();
        assert!(close(t.apply(Point::new(1.0, 1.0)), Point::new(4.0, 2.0)));
        let t = AffineTransform2D::parse("rotate(90, 1, 1)").unwrap();
        assert!(close(t.apply(Point::new(2.0, 1.0)), Point::new(1.0, 2.0)));
    }

    #[test]
    fn parse_rejects_unknown_kinds() {
        assert!(matches!(
            AffineTransform2D::parse("perspective(3)"),
            Err(SvgError::UnsupportedTransformKind(_))
        ));
        assert!(AffineTransform2D::parse("scale(1,2,3)").is_err());
        assert!(AffineTransform2D::parse("translate(1").is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let t = AffineTransform2D::new(2.0, 0.5, -0.3, 1.5, 4.0, -2.0);
        let p = Point::new(0.7, -3.1);
        assert!(close(t.inverse().unwrap().apply(t.apply(p)), p));
        assert!(AffineTransform2D::scale(0.0, 1.0).inverse().is_err());
    }
}
