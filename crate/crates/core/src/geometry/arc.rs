//! Elliptical arc conversion between SVG endpoint parameterization and
//! center parameterization.

use std::f64::consts::{PI, TAU};

use crate::point::Point;

const HALF_ARC_SNAP: f64 = 1e-13;

/// Center-parameterized elliptical arc. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterArc {
    pub center: Point,
    pub rx: f64,
    pub ry: f64,
    pub phi: f64,
    pub theta_start: f64,
    pub theta_sweep: f64,
}

impl CenterArc {
    pub fn point_at_angle(&self, theta: f64) -> Point {
        let (sp, cp) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        Point::new(
            self.center.x + self.rx * cp * ct - self.ry * sp * st,
            self.center.y + self.rx * sp * ct + self.ry * cp * st,
        )
    }

    /// Point at parameter `t ∈ [0, 1]` along the sweep.
    pub fn eval(&self, t: f64) -> Point {
        self.point_at_angle(self.theta_start + t * self.theta_sweep)
    }

    pub fn derivative(&self, t: f64) -> Point {
        let theta = self.theta_start + t * self.theta_sweep;
        let (sp, cp) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        Point::new(
            (-self.rx * cp * st - self.ry * sp * ct) * self.theta_sweep,
            (-self.rx * sp * st + self.ry * cp * ct) * self.theta_sweep,
        )
    }
}

/// Endpoint → center conversion following the SVG implementation notes,
/// including the out-of-range radius correction. Returns `None` when the
/// arc is degenerate (coincident endpoints or a zero radius).
pub fn endpoint_to_center(
    from: Point,
    to: Point,
    rx: f64,
    ry: f64,
    x_axis_rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
) -> Option<CenterArc> {
    if from == to {
        return None;
    }
    let mut rx = rx.abs();
    let mut ry = ry.abs();
    if rx == 0.0 || ry == 0.0 {
        return None;
    }
    let phi = x_axis_rotation_deg.to_radians();
    let (sp, cp) = phi.sin_cos();
    let hx = (from.x - to.x) * 0.5;
    let hy = (from.y - to.y) * 0.5;
    let x1 = cp * hx + sp * hy;
    let y1 = -sp * hx + cp * hy;

    let lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }
    let rx2 = rx * rx;
    let ry2 = ry * ry;
    let den = rx2 * y1 * y1 + ry2 * x1 * x1;
    // The center offset goes as sqrt(1 - λ); rounding near λ = 1 would be
    // amplified to ~1e-8, so near-half arcs snap to the chord midpoint.
    let mut coef = if den > 0.0 && lambda < 1.0 - HALF_ARC_SNAP {
        ((rx2 * ry2 - den).max(0.0) / den).sqrt()
    } else {
        0.0
    };
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1 / ry;
    let cyp = -coef * ry * x1 / rx;
    let center = Point::new(
        cp * cxp - sp * cyp + (from.x + to.x) * 0.5,
        sp * cxp + cp * cyp + (from.y + to.y) * 0.5,
    );

    let ux = (x1 - cxp) / rx;
    let uy = (y1 - cyp) / ry;
    let vx = (-x1 - cxp) / rx;
    let vy = (-y1 - cyp) / ry;
    let theta_start = uy.atan2(ux);
    let mut theta_sweep = (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
    if !sweep && theta_sweep > 0.0 {
        theta_sweep -= TAU;
    } else if sweep && theta_sweep < 0.0 {
        theta_sweep += TAU;
    }
    // A half-turn arc lands on ±π; the sweep flag decides the sign.
    if theta_sweep.abs() == PI {
        theta_sweep = if sweep { PI } else { -PI };
    }
    Some(CenterArc {
        center,
        rx,
        ry,
        phi,
        theta_start,
        theta_sweep,
    })
}

/// Radii and rotation of the ellipse `{ M·R(φ)·diag(rx, ry)·u : |u| = 1 }`,
/// i.e. the image of an ellipse under the linear map `M = [[m00, m01], [m10, m11]]`.
/// Returns `(rx', ry', φ' in degrees)` with `rx' ≥ ry' ≥ 0`.
pub fn transform_ellipse(m: [[f64; 2]; 2], rx: f64, ry: f64, phi_deg: f64) -> (f64, f64, f64) {
    let (sp, cp) = phi_deg.to_radians().sin_cos();
    // B = M · R(φ) · diag(rx, ry)
    let p = (m[0][0] * cp + m[0][1] * sp) * rx;
    let q = (-m[0][0] * sp + m[0][1] * cp) * ry;
    let r = (m[1][0] * cp + m[1][1] * sp) * rx;
    let s = (-m[1][0] * sp + m[1][1] * cp) * ry;
    // Closed-form 2×2 SVD: B = R(α)·diag(σ1, σ2)·R(β).
    let e = (p + s) * 0.5;
    let f = (p - s) * 0.5;
    let g = (r + q) * 0.5;
    let h = (r - q) * 0.5;
    let big_q = e.hypot(h);
    let big_r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let alpha = (a2 + a1) * 0.5;
    (big_q + big_r, (big_q - big_r).abs(), alpha.to_degrees())
}
