//! SVG ingest: parsing, transform flattening, shape conversion and command
//! canonicalization.

mod document;
mod flatten;
pub mod path_data;
mod shapes;
mod style;
pub mod transform;
mod writer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use document::{parse_svg, RawSvgDocument, SvgElement};
pub use flatten::flatten_transforms;
pub use path_data::{canonicalize_commands, format_path_data, transform_commands, CommandKind, PathCommand};
pub use shapes::shape_commands;
pub use style::StyleAttributes;
pub use transform::AffineTransform2D;
pub use writer::write_flat_svg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvgError {
    #[error("malformed markup at {line}:{column}: {message}")]
    MalformedMarkup { line: u32, column: u32, message: String },
    #[error("unsupported SVG element <{0}>")]
    UnsupportedSvgFeature(String),
    #[error("unsupported transform `{0}`")]
    UnsupportedTransformKind(String),
    #[error("transform is not invertible")]
    NonInvertibleTransform,
    #[error("bad path data at offset {offset}: `{token}`")]
    BadPathData { offset: usize, token: String },
    #[error("bad attribute {name}=\"{value}\" on <{element}>")]
    BadAttribute { element: String, name: String, value: String },
}

/// One flattened, transform-free drawing path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPath {
    pub path_id: usize,
    pub commands: Vec<PathCommand>,
    pub style: StyleAttributes,
    pub source_layer: Option<String>,
}

impl NormalizedPath {
    pub fn new(path_id: usize, commands: Vec<PathCommand>) -> Self {
        NormalizedPath { path_id, commands, style: StyleAttributes::default(), source_layer: None }
    }

    /// Convenience constructor from `d` attribute text.
    pub fn from_path_data(path_id: usize, data: &str) -> Result<Self, SvgError> {
        Ok(Self::new(path_id, canonicalize_commands(data)?))
    }

    pub fn transformed(&self, t: &AffineTransform2D) -> Self {
        NormalizedPath { commands: transform_commands(&self.commands, t), ..self.clone() }
    }
}

/// A basic shape element as a standalone path (default style, id 0).
pub fn shape_to_path(element: &SvgElement) -> Result<NormalizedPath, SvgError> {
    Ok(NormalizedPath::new(0, shape_commands(element)?))
}

/// Parses and flattens in one step.
pub fn load_paths(source_id: &str, bytes: &[u8]) -> Result<Vec<NormalizedPath>, SvgError> {
    flatten_transforms(&parse_svg(source_id, bytes)?)
}
