use std::fmt::Write as _;

use super::path_data::format_path_data;
use super::NormalizedPath;
use crate::geometry::bounding_box;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Per-path stroke color override.
pub type StrokeOverride<'a> = &'a dyn Fn(&NormalizedPath) -> Option<String>;

/// Writes a flat SVG: one `<path>` per record, no groups or transforms.
/// `stroke_override` replaces the stroke color of individual paths.
pub fn write_flat_svg(paths: &[NormalizedPath], stroke_override: Option<StrokeOverride>) -> String {
    let mut out = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\"");
    if let Some(bb) = bounding_box(paths) {
        let pad = 0.01 * bb.width().max(bb.height()).max(1e-9);
        let _ = write!(
            out,
            " viewBox=\"{} {} {} {}\"",
            bb.min.x - pad,
            bb.min.y - pad,
            bb.width() + 2.0 * pad,
            bb.height() + 2.0 * pad
        );
    }
    out.push_str(">\n");
    for path in paths {
        let stroke = stroke_override
            .and_then(|f| f(path))
            .unwrap_or_else(|| path.style.stroke_hex());
        let _ = write!(
            out,
            "  <path d=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"",
            format_path_data(&path.commands),
            if path.style.has_fill { "black" } else { "none" },
            stroke,
            path.style.stroke_width
        );
        if let Some(layer) = &path.source_layer {
            let _ = write!(out, " data-layer=\"{}\"", escape(layer));
        }
        out.push_str("/>\n");
    }
    out.push_str("</svg>\n");
    out
}
