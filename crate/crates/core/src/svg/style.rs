use serde::{Deserialize, Serialize};

/// Rendering attributes that feed node features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyleAttributes {
    pub has_fill: bool,
    /// Stroke color, components in `[0, 1]`.
    pub stroke_rgb: [f64; 3],
    pub stroke_width: f64,
}

impl Default for StyleAttributes {
    fn default() -> Self {
        StyleAttributes {
            has_fill: false,
            stroke_rgb: [0.0; 3],
            stroke_width: 1.0,
        }
    }
}

impl StyleAttributes {
    pub fn stroke_hex(&self) -> String {
        let c = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
        format!("#{:02x}{:02x}{:02x}", c(self.stroke_rgb[0]), c(self.stroke_rgb[1]), c(self.stroke_rgb[2]))
    }
}

/// Raw, still-unresolved style values carried down the element tree.
#[derive(Debug, Clone, Default)]
pub(crate) struct CascadedStyle {
    pub fill: Option<String>,
    pub stroke: Option<String>,
    pub stroke_width: Option<String>,
}

impl CascadedStyle {
    /// Child style: presentation attributes override the inherited values,
    /// and the inline `style` declarations override both.
    pub fn child<'a>(&self, attr: impl Fn(&str) -> Option<&'a str>) -> CascadedStyle {
        let mut out = self.clone();
        let mut set = |name: &str, value: &str| {
            let value = value.trim();
            if value.is_empty() || value == "inherit" {
                return;
            }
            let slot = match name {
                "fill" => &mut out.fill,
                "stroke" => &mut out.stroke,
                "stroke-width" => &mut out.stroke_width,
                _ => return,
            };
            *slot = Some(value.to_string());
        };
        for name in ["fill", "stroke", "stroke-width"] {
            if let Some(v) = attr(name) {
                set(name, v);
            }
        }
        if let Some(inline) = attr("style") {
            for decl in inline.split(';') {
                if let Some((k, v)) = decl.split_once(':') {
                    let v = v.trim().trim_end_matches("!important").trim();
                    set(k.trim(), v);
                }
            }
        }
        out
    }

    /// Resolves to concrete attributes. `width_scale` is the factor the
    /// accumulated transform applies to lengths.
    pub fn resolve(&self, width_scale: f64) -> StyleAttributes {
        let has_fill = self.fill.as_deref().is_some_and(|v| !v.eq_ignore_ascii_case("none"));
        let mut style = StyleAttributes { has_fill, ..Default::default() };
        if let Some(stroke) = self.stroke.as_deref() {
            if !stroke.eq_ignore_ascii_case("none") {
                match csscolorparser::parse(stroke) {
                    Ok(c) => {
                        style.stroke_rgb = [f64::from(c.r), f64::from(c.g), f64::from(c.b)]
                            .map(|v| v.clamp(0.0, 1.0));
                    }
                    Err(_) => log::warn!("unparsable stroke color `{stroke}`, using black"),
                }
            }
        }
        if let Some(width) = self.stroke_width.as_deref() {
            match parse_length(width) {
                Some(w) if w >= 0.0 => style.stroke_width = w,
                _ => log::warn!("unparsable stroke-width `{width}`, using 1"),
            }
        }
        style.stroke_width *= width_scale;
        style
    }
}

/// Parses a user-unit length, accepting an optional `px` suffix.
pub(crate) fn parse_length(text: &str) -> Option<f64> {
    let t = text.trim();
    let t = t.strip_suffix("px").unwrap_or(t).trim();
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}
