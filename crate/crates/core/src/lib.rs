//! Vector drawing → graph conversion and hierarchical GATv2 line segmentation.

pub mod config;
pub mod eval;
pub mod gat;
pub mod geometry;
pub mod graph;
pub mod labels;
pub mod point;
pub mod svg;
pub mod synth;

pub use point::Point;
