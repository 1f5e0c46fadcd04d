//! Path command model and `d` attribute canonicalization.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::transform::AffineTransform2D;
use super::SvgError;
use crate::geometry::arc::{endpoint_to_center, transform_ellipse};
use crate::point::Point;

/// The ten SVG path command kinds, in tensor index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommandKind {
    M,
    L,
    H,
    V,
    C,
    S,
    Q,
    T,
    A,
    Z,
}

impl CommandKind {
    pub const ALL: [CommandKind; 10] = [
        CommandKind::M,
        CommandKind::L,
        CommandKind::H,
        CommandKind::V,
        CommandKind::C,
        CommandKind::S,
        CommandKind::Q,
        CommandKind::T,
        CommandKind::A,
        CommandKind::Z,
    ];

    /// Number of parameters the command carries.
    pub fn arity(self) -> usize {
        match self {
            CommandKind::M | CommandKind::L | CommandKind::T => 2,
            CommandKind::H | CommandKind::V => 1,
            CommandKind::C => 6,
            CommandKind::S | CommandKind::Q => 4,
            CommandKind::A => 7,
            CommandKind::Z => 0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        b"MLHVCSQTAZ"[self as usize] as char
    }

    fn from_letter(c: u8) -> Option<(CommandKind, bool)> {
        let kind = match c.to_ascii_uppercase() {
            b'M' => CommandKind::M,
            b'L' => CommandKind::L,
            b'H' => CommandKind::H,
            b'V' => CommandKind::V,
            b'C' => CommandKind::C,
            b'S' => CommandKind::S,
            b'Q' => CommandKind::Q,
            b'T' => CommandKind::T,
            b'A' => CommandKind::A,
            b'Z' => CommandKind::Z,
            _ => return None,
        };
        Some((kind, c.is_ascii_lowercase()))
    }
}

/// An absolute path command in canonical form. Canonical paths only use
/// `M`, `L`, `C`, `Q`, `A` and `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathCommand {
    MoveTo(Point),
    LineTo(Point),
    CubicTo(Point, Point, Point),
    QuadTo(Point, Point),
    ArcTo {
        rx: f64,
        ry: f64,
        x_axis_rotation: f64,
        large_arc: bool,
        sweep: bool,
        to: Point,
    },
    Close,
}

impl PathCommand {
    pub fn kind(&self) -> CommandKind {
        match self {
            PathCommand::MoveTo(_) => CommandKind::M,
            PathCommand::LineTo(_) => CommandKind::L,
            PathCommand::CubicTo(..) => CommandKind::C,
            PathCommand::QuadTo(..) => CommandKind::Q,
            PathCommand::ArcTo { .. } => CommandKind::A,
            PathCommand::Close => CommandKind::Z,
        }
    }

    /// Parameters in SVG order; length equals `kind().arity()`.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            PathCommand::MoveTo(p) | PathCommand::LineTo(p) => vec![p.x, p.y],
            PathCommand::CubicTo(c1, c2, p) => vec![c1.x, c1.y, c2.x, c2.y, p.x, p.y],
            PathCommand::QuadTo(c, p) => vec![c.x, c.y, p.x, p.y],
            PathCommand::ArcTo { rx, ry, x_axis_rotation, large_arc, sweep, to } => vec![
                rx,
                ry,
                x_axis_rotation,
                f64::from(u8::from(large_arc)),
                f64::from(u8::from(sweep)),
                to.x,
                to.y,
            ],
            PathCommand::Close => vec![],
        }
    }

    /// Builds a canonical command from its kind and parameter list.
    pub fn from_parts(kind: CommandKind, params: &[f64]) -> Option<PathCommand> {
        if params.len() != kind.arity() {
            return None;
        }
        let p = |i: usize| Point::new(params[i], params[i + 1]);
        Some(match kind {
            CommandKind::M => PathCommand::MoveTo(p(0)),
            CommandKind::L => PathCommand::LineTo(p(0)),
            CommandKind::C => PathCommand::CubicTo(p(0), p(2), p(4)),
            CommandKind::Q => PathCommand::QuadTo(p(0), p(2)),
            CommandKind::A => PathCommand::ArcTo {
                rx: params[0],
                ry: params[1],
                x_axis_rotation: params[2],
                large_arc: params[3] != 0.0,
                sweep: params[4] != 0.0,
                to: p(5),
            },
            CommandKind::Z => PathCommand::Close,
            _ => return None,
        })
    }

    /// End point of the command, `None` for `Close`.
    pub fn end_point(&self) -> Option<Point> {
        match *self {
            PathCommand::MoveTo(p) | PathCommand::LineTo(p) => Some(p),
            PathCommand::CubicTo(_, _, p) | PathCommand::QuadTo(_, p) => Some(p),
            PathCommand::ArcTo { to, .. } => Some(to),
            PathCommand::Close => None,
        }
    }
}

/// Formats commands as an absolute `d` attribute.
pub fn format_path_data(commands: &[PathCommand]) -> String {
    let mut out = String::new();
    for (i, cmd) in commands.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push(cmd.kind().letter());
        let params = cmd.params();
        for (j, v) in params.iter().enumerate() {
            let sep = match (cmd.kind(), j) {
                (_, 0) => ' ',
                (CommandKind::A, 6) => ',',
                (CommandKind::A, _) => ' ',
                (_, j) if j % 2 == 1 => ',',
                _ => ' ',
            };
            let _ = write!(out, "{sep}{v}");
        }
    }
    out
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b' ' | b'\t' | b'\n' | b'\r' | b'\x0c' | b',') {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_separators();
        self.pos >= self.bytes.len()
    }

    fn peek_is_number_start(&mut self) -> bool {
        self.skip_separators();
        self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'0'..=b'9' | b'+' | b'-' | b'.')
    }

    fn error(&self, start: usize) -> SvgError {
        let end = (start + 12).min(self.bytes.len());
        let token = String::from_utf8_lossy(&self.bytes[start..end])
            .split_whitespace()
            .next()
            .unwrap_or("<end of data>")
            .to_string();
        SvgError::BadPathData { offset: start, token }
    }

    fn number(&mut self) -> Result<f64, SvgError> {
        self.skip_separators();
        let start = self.pos;
        let b = self.bytes;
        let mut i = self.pos;
        if i < b.len() && matches!(b[i], b'+' | b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let mut had_digits = i > digits_start;
        if i < b.len() && b[i] == b'.' {
            i += 1;
            let frac_start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            had_digits |= i > frac_start;
        }
        if !had_digits {
            return Err(self.error(start));
        }
        if i < b.len() && matches!(b[i], b'e' | b'E') {
            let mut j = i + 1;
            if j < b.len() && matches!(b[j], b'+' | b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let text = std::str::from_utf8(&b[start..i]).map_err(|_| self.error(start))?;
        let value: f64 = text.parse().map_err(|_| self.error(start))?;
        if !value.is_finite() {
            return Err(self.error(start));
        }
        self.pos = i;
        Ok(value)
    }

    fn flag(&mut self) -> Result<bool, SvgError> {
        self.skip_separators();
        match self.bytes.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.error(self.pos)),
        }
    }

    fn point(&mut self) -> Result<Point, SvgError> {
        let x = self.number()?;
        let y = self.number()?;
        Ok(Point::new(x, y))
    }
}

/// Parses a `d` attribute and converts it to canonical absolute commands:
/// relative commands become absolute, `H`/`V` become `L`, `S`/`T` become
/// `C`/`Q` with reflected control points, implicit repetitions are expanded,
/// and zero-radius arcs become lines.
pub fn canonicalize_commands(data: &str) -> Result<Vec<PathCommand>, SvgError> {
    let mut lex = Lexer { bytes: data.as_bytes(), pos: 0 };
    let mut out: Vec<PathCommand> = Vec::new();
    let mut current = Point::ORIGIN;
    let mut subpath_start = Point::ORIGIN;
    // Control point available for S/T reflection, tagged by curve family.
    let mut last_cubic_ctrl: Option<Point> = None;
    let mut last_quad_ctrl: Option<Point> = None;
    let mut active: Option<(CommandKind, bool)> = None;
    let mut closed_subpath = false;

    while !lex.at_end() {
        let cmd_pos = lex.pos;
        let c = lex.bytes[lex.pos];
        let (kind, relative) = if let Some(k) = CommandKind::from_letter(c) {
            lex.pos += 1;
            k
        } else if lex.peek_is_number_start() {
            match active {
                Some((CommandKind::M, rel)) => (CommandKind::L, rel),
                Some((CommandKind::Z, _)) | None => return Err(lex.error(cmd_pos)),
                Some(k) => k,
            }
        } else {
            return Err(lex.error(cmd_pos));
        };
        if out.is_empty() && kind != CommandKind::M {
            return Err(lex.error(cmd_pos));
        }
        active = Some((kind, relative));
        let base = if relative { current } else { Point::ORIGIN };

        // A drawing command right after Z starts a new subpath at the old start.
        if closed_subpath && kind != CommandKind::M && kind != CommandKind::Z {
            out.push(PathCommand::MoveTo(subpath_start));
        }
        closed_subpath = false;

        let mut cubic_ctrl = None;
        let mut quad_ctrl = None;
        match kind {
            CommandKind::M => {
                let p = lex.point()? + base;
                out.push(PathCommand::MoveTo(p));
                current = p;
                subpath_start = p;
            }
            CommandKind::L => {
                let p = lex.point()? + base;
                out.push(PathCommand::LineTo(p));
                current = p;
            }
            CommandKind::H => {
                let x = lex.number()? + base.x;
                let p = Point::new(x, current.y);
                out.push(PathCommand::LineTo(p));
                current = p;
            }
            CommandKind::V => {
                let y = lex.number()? + base.y;
                let p = Point::new(current.x, y);
                out.push(PathCommand::LineTo(p));
                current = p;
            }
            CommandKind::C => {
                let c1 = lex.point()? + base;
                let c2 = lex.point()? + base;
                let p = lex.point()? + base;
                out.push(PathCommand::CubicTo(c1, c2, p));
                cubic_ctrl = Some(c2);
                current = p;
            }
            CommandKind::S => {
                let c1 = match last_cubic_ctrl {
                    Some(prev) => current * 2.0 - prev,
                    None => current,
                };
                let c2 = lex.point()? + base;
                let p = lex.point()? + base;
                out.push(PathCommand::CubicTo(c1, c2, p));
                cubic_ctrl = Some(c2);
                current = p;
            }
            CommandKind::Q => {
                let c1 = lex.point()? + base;
                let p = lex.point()? + base;
                out.push(PathCommand::QuadTo(c1, p));
                quad_ctrl = Some(c1);
                current = p;
            }
            CommandKind::T => {
                let c1 = match last_quad_ctrl {
                    Some(prev) => current * 2.0 - prev,
                    None => current,
                };
                let p = lex.point()? + base;
                out.push(PathCommand::QuadTo(c1, p));
                quad_ctrl = Some(c1);
                current = p;
            }
            CommandKind::A => {
                let rx = lex.number()?.abs();
                let ry = lex.number()?.abs();
                let x_axis_rotation = lex.number()?;
                let large_arc = lex.flag()?;
                let sweep = lex.flag()?;
                let to = lex.point()? + base;
                if to == current {
                    // Coincident endpoints: the arc is omitted.
                } else if rx == 0.0 || ry == 0.0 {
                    out.push(PathCommand::LineTo(to));
                } else {
                    out.push(PathCommand::ArcTo { rx, ry, x_axis_rotation, large_arc, sweep, to });
                }
                current = to;
            }
            CommandKind::Z => {
                if !matches!(out.last(), Some(PathCommand::Close)) {
                    out.push(PathCommand::Close);
                }
                current = subpath_start;
                closed_subpath = true;
            }
        }
        last_cubic_ctrl = cubic_ctrl;
        last_quad_ctrl = quad_ctrl;
    }
    Ok(out)
}

/// Applies an affine transform to canonical commands. Arcs stay arcs: the
/// affine image of an ellipse is an ellipse, so radii and rotation are
/// recomputed exactly; an arc collapsed to a segment becomes a line.
pub fn transform_commands(commands: &[PathCommand], t: &AffineTransform2D) -> Vec<PathCommand> {
    if t.is_identity() {
        return commands.to_vec();
    }
    let mut out = Vec::with_capacity(commands.len());
    let mut current = Point::ORIGIN;
    let mut subpath_start = Point::ORIGIN;
    let flips = t.determinant() < 0.0;
    for cmd in commands {
        let mapped = match *cmd {
            PathCommand::MoveTo(p) => {
                subpath_start = p;
                PathCommand::MoveTo(t.apply(p))
            }
            PathCommand::LineTo(p) => PathCommand::LineTo(t.apply(p)),
            PathCommand::CubicTo(c1, c2, p) => PathCommand::CubicTo(t.apply(c1), t.apply(c2), t.apply(p)),
            PathCommand::QuadTo(c, p) => PathCommand::QuadTo(t.apply(c), t.apply(p)),
            PathCommand::ArcTo { rx, ry, x_axis_rotation, large_arc, sweep, to } => {
                match endpoint_to_center(current, to, rx, ry, x_axis_rotation, large_arc, sweep) {
                    None => PathCommand::LineTo(t.apply(to)),
                    Some(_) => {
                        let m = [[t.a, t.c], [t.b, t.d]];
                        // Map the radii as written; any out-of-range correction
                        // commutes with the affine map and is redone on evaluation.
                        let (nrx, nry, nphi) = transform_ellipse(m, rx.abs(), ry.abs(), x_axis_rotation);
                        if nry <= nrx * 1e-12 {
                            PathCommand::LineTo(t.apply(to))
                        } else {
                            PathCommand::ArcTo {
                                rx: nrx,
                                ry: nry,
                                x_axis_rotation: nphi,
                                large_arc,
                                sweep: sweep != flips,
                                to: t.apply(to),
                            }
                        }
                    }
                }
            }
            PathCommand::Close => PathCommand::Close,
        };
        current = cmd.end_point().unwrap_or(subpath_start);
        out.push(mapped);
    }
    out
}
