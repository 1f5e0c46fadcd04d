//! Conversion of basic shapes to canonical path commands.

use super::document::SvgElement;
use super::path_data::PathCommand;
use super::style::parse_length;
use super::SvgError;
use crate::point::Point;

fn number_attr(el: &SvgElement, name: &str) -> Result<f64, SvgError> {
    match el.attr(name) {
        None => Ok(0.0),
        Some(v) => parse_length(v).ok_or_else(|| SvgError::BadAttribute {
            element: el.name.clone(),
            name: name.to_string(),
            value: v.to_string(),
        }),
    }
}

fn arc(r: Point, to: Point, sweep: bool) -> PathCommand {
    PathCommand::ArcTo { rx: r.x, ry: r.y, x_axis_rotation: 0.0, large_arc: false, sweep, to }
}

fn ellipse_commands(c: Point, rx: f64, ry: f64) -> Vec<PathCommand> {
    let r = Point::new(rx, ry);
    vec![
        PathCommand::MoveTo(Point::new(c.x + rx, c.y)),
        arc(r, Point::new(c.x, c.y + ry), true),
        arc(r, Point::new(c.x - rx, c.y), true),
        arc(r, Point::new(c.x, c.y - ry), true),
        arc(r, Point::new(c.x + rx, c.y), true),
        PathCommand::Close,
    ]
}

fn degenerate(el: &SvgElement, at: Point) -> Vec<PathCommand> {
    log::warn!("degenerate <{}> at line {}; emitting a single point", el.name, el.line);
    vec![PathCommand::MoveTo(at)]
}

fn parse_points(el: &SvgElement) -> Result<Vec<Point>, SvgError> {
    let raw = el.attr("points").unwrap_or("");
    let mut nums = Vec::new();
    for tok in raw.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
        let v: f64 = tok.parse().map_err(|_| SvgError::BadAttribute {
            element: el.name.clone(),
            name: "points".into(),
            value: raw.to_string(),
        })?;
        nums.push(v);
    }
    if nums.len() % 2 == 1 {
        log::warn!("odd coordinate count in <{}> points; dropping the last value", el.name);
    }
    Ok(nums.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect())
}

/// Path commands reproducing a basic shape (`line`, `rect`, `circle`,
/// `ellipse`, `polyline`, `polygon`). Zero-size rects and circles collapse
/// to a single `M`. Returns an empty list for shapes with nothing to draw.
pub fn shape_commands(el: &SvgElement) -> Result<Vec<PathCommand>, SvgError> {
    Ok(match el.name.as_str() {
        "line" => vec![
            PathCommand::MoveTo(Point::new(number_attr(el, "x1")?, number_attr(el, "y1")?)),
            PathCommand::LineTo(Point::new(number_attr(el, "x2")?, number_attr(el, "y2")?)),
        ],
        "rect" => {
            let (x, y) = (number_attr(el, "x")?, number_attr(el, "y")?);
            let (w, h) = (number_attr(el, "width")?, number_attr(el, "height")?);
            if w <= 0.0 || h <= 0.0 {
                return Ok(degenerate(el, Point::new(x, y)));
            }
            let rx_attr = el.attr("rx").and_then(parse_length).filter(|v| *v > 0.0);
            let ry_attr = el.attr("ry").and_then(parse_length).filter(|v| *v > 0.0);
            let (rx, ry) = match (rx_attr, ry_attr) {
                (None, None) => (0.0, 0.0),
                (Some(r), None) | (None, Some(r)) => (r, r),
                (Some(a), Some(b)) => (a, b),
            };
            let (rx, ry) = (rx.min(w / 2.0), ry.min(h / 2.0));
            if rx == 0.0 || ry == 0.0 {
                vec![
                    PathCommand::MoveTo(Point::new(x, y)),
                    PathCommand::LineTo(Point::new(x, y + h)),
                    PathCommand::LineTo(Point::new(x + w, y + h)),
                    PathCommand::LineTo(Point::new(x + w, y)),
                    PathCommand::Close,
                ]
            } else {
                let r = Point::new(rx, ry);
                vec![
                    PathCommand::MoveTo(Point::new(x, y + ry)),
                    PathCommand::LineTo(Point::new(x, y + h - ry)),
                    arc(r, Point::new(x + rx, y + h), false),
                    PathCommand::LineTo(Point::new(x + w - rx, y + h)),
                    arc(r, Point::new(x + w, y + h - ry), false),
                    PathCommand::LineTo(Point::new(x + w, y + ry)),
                    arc(r, Point::new(x + w - rx, y), false),
                    PathCommand::LineTo(Point::new(x + rx, y)),
                    arc(r, Point::new(x, y + ry), false),
                    PathCommand::Close,
                ]
            }
        }
        "circle" => {
            let c = Point::new(number_attr(el, "cx")?, number_attr(el, "cy")?);
            let r = number_attr(el, "r")?;
            if r <= 0.0 {
                return Ok(degenerate(el, c));
            }
            ellipse_commands(c, r, r)
        }
        "ellipse" => {
            let c = Point::new(number_attr(el, "cx")?, number_attr(el, "cy")?);
            let (rx, ry) = (number_attr(el, "rx")?, number_attr(el, "ry")?);
            if rx <= 0.0 || ry <= 0.0 {
                return Ok(degenerate(el, c));
            }
            ellipse_commands(c, rx, ry)
        }
        "polyline" | "polygon" => {
            let points = parse_points(el)?;
            let mut cmds: Vec<PathCommand> = points
                .iter()
                .enumerate()
                .map(|(i, &p)| if i == 0 { PathCommand::MoveTo(p) } else { PathCommand::LineTo(p) })
                .collect();
            if el.name == "polygon" && !cmds.is_empty() {
                cmds.push(PathCommand::Close);
            }
            cmds
        }
        other => return Err(SvgError::UnsupportedSvgFeature(other.to_string())),
    })
}
