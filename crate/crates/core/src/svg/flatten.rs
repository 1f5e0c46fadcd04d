use super::document::{RawSvgDocument, SvgElement};
use super::path_data::{canonicalize_commands, transform_commands};
use super::shapes::shape_commands;
use super::style::{parse_length, CascadedStyle};
use super::transform::AffineTransform2D;
use super::{NormalizedPath, SvgError};

/// Attributes naming the annotation layer of an element, by priority.
const LAYER_ATTRIBUTES: &[&str] = &["data-layer", "semantic-id"];

#[derive(Clone, Default)]
struct Context {
    transform: AffineTransform2D,
    style: CascadedStyle,
    explicit_layer: Option<String>,
    group_id: Option<String>,
}

/// Bakes every transform into absolute coordinates and removes grouping.
/// Output is in document pre-order with dense ids starting at 0.
pub fn flatten_transforms(doc: &RawSvgDocument) -> Result<Vec<NormalizedPath>, SvgError> {
    let mut out = Vec::new();
    visit(&doc.root, &Context::default(), true, &mut out)?;
    Ok(out)
}

fn visit(el: &SvgElement, parent: &Context, is_root: bool, out: &mut Vec<NormalizedPath>) -> Result<(), SvgError> {
    if el.ignored {
        return Ok(());
    }
    let mut ctx = parent.clone();
    if el.name == "svg" && !is_root {
        let x = el.attr("x").and_then(parse_length).unwrap_or(0.0);
        let y = el.attr("y").and_then(parse_length).unwrap_or(0.0);
        ctx.transform = ctx.transform.compose(&AffineTransform2D::translate(x, y));
    }
    if let Some(t) = el.attr("transform") {
        ctx.transform = ctx.transform.compose(&AffineTransform2D::parse(t)?);
    }
    ctx.style = parent.style.child(|name| el.attr(name));
    if let Some(layer) = LAYER_ATTRIBUTES.iter().find_map(|a| el.attr(a)) {
        ctx.explicit_layer = Some(layer.to_string());
    }
    if el.name == "g" {
        if let Some(id) = el.attr("id") {
            ctx.group_id = Some(id.to_string());
        }
    }

    match el.name.as_str() {
        "svg" | "g" => {
            for child in &el.children {
                visit(child, &ctx, false, out)?;
            }
        }
        name => {
            let local = if name == "path" {
                canonicalize_commands(el.attr("d").unwrap_or(""))?
            } else {
                shape_commands(el)?
            };
            if local.is_empty() {
                return Ok(());
            }
            let width_scale = ctx.transform.determinant().abs().sqrt();
            out.push(NormalizedPath {
                path_id: out.len(),
                commands: transform_commands(&local, &ctx.transform),
                style: ctx.style.resolve(width_scale),
                source_layer: ctx.explicit_layer.clone().or_else(|| ctx.group_id.clone()),
            });
        }
    }
    Ok(())
}
