use super::SvgError;

const SVG_NAMESPACE: &str = "http://www.w3.org/2000/svg";

/// Elements converted to geometry (or containers of geometry).
const SUPPORTED: &[&str] = &["svg", "g", "path", "line", "rect", "circle", "ellipse", "polyline", "polygon"];

/// Elements accepted but dropped together with their content.
const IGNORED: &[&str] = &["defs", "text", "title", "desc", "metadata"];

/// One element of the parsed markup tree.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgElement {
    pub name: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<SvgElement>,
    /// Set for elements that are kept in the tree but contribute no geometry.
    pub ignored: bool,
    pub line: u32,
    pub column: u32,
}

impl SvgElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attributes.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    /// Pre-order traversal.
    pub fn descendants(&self) -> Vec<&SvgElement> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(el) = stack.pop() {
            out.push(el);
            stack.extend(el.children.iter().rev());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawSvgDocument {
    pub source_id: String,
    pub root: SvgElement,
    /// `(min-x, min-y, width, height)`.
    pub viewbox: Option<[f64; 4]>,
}

impl RawSvgDocument {
    pub fn count_elements(&self, name: &str) -> usize {
        self.root.descendants().iter().filter(|e| e.name == name).count()
    }
}

/// Parses SVG markup into an owned element tree. Fails on malformed XML and
/// on elements outside the supported set; `text`, `defs` and descriptive
/// elements are kept as ignored leaves.
pub fn parse_svg(source_id: &str, bytes: &[u8]) -> Result<RawSvgDocument, SvgError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        let column = (prefix.len() - prefix.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1)) as u32 + 1;
        SvgError::MalformedMarkup { line, column, message: "invalid UTF-8".into() }
    })?;
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        SvgError::MalformedMarkup { line: pos.row, column: pos.col, message: e.to_string() }
    })?;
    let root_node = doc.root_element();
    if root_node.tag_name().name() != "svg" {
        return Err(SvgError::UnsupportedSvgFeature(root_node.tag_name().name().to_string()));
    }
    let root = convert(&doc, root_node)?.expect("root is an svg element");
    let viewbox = root.attr("viewBox").and_then(|v| {
        let nums: Vec<f64> = v
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .filter_map(|s| s.parse().ok())
            .collect();
        <[f64; 4]>::try_from(nums).ok()
    });
    Ok(RawSvgDocument { source_id: source_id.to_string(), root, viewbox })
}

fn convert(doc: &roxmltree::Document, node: roxmltree::Node) -> Result<Option<SvgElement>, SvgError> {
    let tag = node.tag_name();
    if let Some(ns) = tag.namespace() {
        if ns != SVG_NAMESPACE {
            // Editor-private elements (sodipodi, inkscape, ...) are not SVG content.
            return Ok(None);
        }
    }
    let name = tag.name();
    let ignored = IGNORED.contains(&name);
    if !ignored && !SUPPORTED.contains(&name) {
        return Err(SvgError::UnsupportedSvgFeature(name.to_string()));
    }
    let pos = doc.text_pos_at(node.range().start);
    let attributes = node
        .attributes()
        .map(|a| (a.name().to_string(), a.value().to_string()))
        .collect();
    let mut children = Vec::new();
    if !ignored {
        for child in node.children().filter(|c| c.is_element()) {
            if let Some(el) = convert(doc, child)? {
                children.push(el);
            }
        }
    }
    Ok(Some(SvgElement {
        name: name.to_string(),
        attributes,
        children,
        ignored,
        line: pos.row,
        column: pos.col,
    }))
}
