//! Three-level label hierarchies and layer-name mapping.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name every rare layer is folded into.
pub const OTHERS: &str = "Others";
pub const DEFAULT_RARE_THRESHOLD: f64 = 1.0 / 3.0;

pub const TUM_TSV: &str = include_str!("../data/tum.tsv");
pub const FLOORPLANCAD_TSV: &str = include_str!("../data/floorplancad.tsv");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate leaf `{0}`")]
    DuplicateLeaf(String),
    #[error("hierarchy is not a forest: {0}")]
    NonForestHierarchy(String),
    #[error("level {level} ids are not dense 0..n: {ids:?}")]
    SparseIds { level: usize, ids: Vec<usize> },
    #[error("unknown leaf `{leaf}`; closest known: {}", suggestions.join(", "))]
    UnknownLeaf { leaf: String, suggestions: Vec<String> },
    #[error("cannot read label map: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub leaf_id: usize,
    pub name: String,
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
    /// Human-readable name for reports; defaults to `name`.
    pub display: String,
}

impl Leaf {
    pub fn triple(&self) -> [usize; 3] {
        [self.l1, self.l2, self.l3]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelMap {
    pub leaves: Vec<Leaf>,
    pub level_sizes: [usize; 3],
    pub provenance: String,
}

fn field(parts: &[&str], i: usize, line: usize) -> Result<usize, LabelError> {
    parts[i].trim().parse().map_err(|_| LabelError::Parse { line, message: format!("bad integer `{}`", parts[i]) })
}

impl LabelMap {
    /// Parses tab-separated `leaf_id, name, l1, l2, l3[, display]` rows.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, provenance: &str) -> Result<LabelMap, LabelError> {
        let mut leaves = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = raw.split('\t').collect();
            if parts.len() != 5 && parts.len() != 6 {
                return Err(LabelError::Parse { line, message: format!("expected 5 or 6 fields, got {}", parts.len()) });
            }
            let name = parts[1].trim().to_string();
            leaves.push(Leaf {
                leaf_id: field(&parts, 0, line)?,
                display: parts.get(5).map_or(name.clone(), |d| d.trim().to_string()),
                name,
                l1: field(&parts, 2, line)?,
                l2: field(&parts, 3, line)?,
                l3: field(&parts, 4, line)?,
            });
        }
        Self::from_leaves(leaves, provenance)
    }

    pub fn from_leaves(mut leaves: Vec<Leaf>, provenance: &str) -> Result<LabelMap, LabelError> {
        leaves.sort_by_key(|l| l.leaf_id);
        // Parents must be functions: l3 -> (l1, l2), and name -> triple.
        let mut parent_of_l3: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut by_name: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
        for leaf in &leaves {
            if let Some(&prev) = parent_of_l3.get(&leaf.l3) {
                if prev != (leaf.l1, leaf.l2) {
                    return Err(LabelError::NonForestHierarchy(format!(
                        "l3 {} sits under (l1, l2) = {:?} and {:?}",
                        leaf.l3,
                        prev,
                        (leaf.l1, leaf.l2)
                    )));
                }
            }
            parent_of_l3.insert(leaf.l3, (leaf.l1, leaf.l2));
            if let Some(prev) = by_name.insert(&leaf.name, leaf.triple()) {
                if prev != leaf.triple() {
                    return Err(LabelError::NonForestHierarchy(format!(
                        "`{}` is listed under {:?} and {:?}",
                        leaf.name,
                        prev,
                        leaf.triple()
                    )));
                }
                return Err(LabelError::DuplicateLeaf(leaf.name.clone()));
            }
        }
        if let Some(w) = leaves.windows(2).find(|w| w[0].leaf_id == w[1].leaf_id) {
            return Err(LabelError::DuplicateLeaf(format!("leaf id {}", w[0].leaf_id)));
        }
        let mut level_sizes = [0; 3];
        for (level, size) in level_sizes.iter_mut().enumerate() {
            let ids: BTreeSet<usize> = leaves.iter().map(|l| l.triple()[level]).collect();
            let ids: Vec<usize> = ids.into_iter().collect();
            if ids.iter().enumerate().any(|(i, &id)| i != id) {
                return Err(LabelError::SparseIds { level: level + 1, ids });
            }
            *size = ids.len();
        }
        Ok(LabelMap { leaves, level_sizes, provenance: provenance.to_string() })
    }

    pub fn load(path: &Path) -> Result<LabelMap, LabelError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabelError::Io(format!("{}: {e}", path.display())))?;
        let provenance = path.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
        Self::parse(&text, &provenance)
    }

    pub fn tum() -> LabelMap {
        Self::parse(TUM_TSV, "TUM-VHF").expect("shipped TUM map is valid")
    }

    pub fn floorplancad() -> LabelMap {
        Self::parse(FLOORPLANCAD_TSV, "FloorplanCAD").expect("shipped FloorplanCAD map is valid")
    }

    /// `builtin:tum`, `builtin:floorplancad`, `builtin:synthetic`, or a TSV
    /// path.
    pub fn resolve(source: &str) -> Result<LabelMap, LabelError> {
        match source {
            "builtin:tum" => Ok(Self::tum()),
            "builtin:floorplancad" => Ok(Self::floorplancad()),
            "builtin:synthetic" => Ok(crate::synth::synthetic_label_map()),
            path => Self::load(Path::new(path)),
        }
    }

    /// The catch-all leaf, named `Others` or `other` in any case.
    pub fn others_leaf(&self) -> Option<&Leaf> {
        self.leaves.iter().find(|l| l.name.eq_ignore_ascii_case(OTHERS) || l.name.eq_ignore_ascii_case("other"))
    }

    pub fn map_name(&self, name: &str) -> Result<[usize; 3], LabelError> {
        if let Some(leaf) = self.leaves.iter().find(|l| l.name == name) {
            return Ok(leaf.triple());
        }
        let mut scored: Vec<(f64, &str)> =
            self.leaves.iter().map(|l| (strsim::jaro_winkler(name, &l.name), l.name.as_str())).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
        Err(LabelError::UnknownLeaf {
            leaf: name.to_string(),
            suggestions: scored.iter().take(3).map(|(_, n)| n.to_string()).collect(),
        })
    }

    pub fn map_id(&self, leaf_id: usize) -> Result<[usize; 3], LabelError> {
        self.leaves.binary_search_by_key(&leaf_id, |l| l.leaf_id).map(|i| self.leaves[i].triple()).map_err(|_| {
            LabelError::UnknownLeaf { leaf: format!("#{leaf_id}"), suggestions: vec![] }
        })
    }

    /// Display name of each category at `level` (1-based), by id. Where a
    /// coarse category groups several leaves, the first leaf's display name
    /// is used unless it is the only child.
    pub fn category_names(&self, level: usize) -> Vec<String> {
        let size = self.level_sizes[level - 1];
        (0..size)
            .map(|id| {
                let members: Vec<&Leaf> = self.leaves.iter().filter(|l| l.triple()[level - 1] == id).collect();
                match members.as_slice() {
                    [only] => only.display.clone(),
                    _ if level == 3 => members[0].display.clone(),
                    _ => format!("L{level}-{id}"),
                }
            })
            .collect()
    }
}

/// Layers seen in fewer than `threshold` of all drawings map to
/// [`OTHERS`]; the rest map to themselves.
pub fn aggregate_rare(
    occurrence: &BTreeMap<String, usize>,
    total_drawings: usize,
    threshold: f64,
) -> BTreeMap<String, String> {
    let total = total_drawings.max(1) as f64;
    occurrence
        .iter()
        .map(|(layer, &count)| {
            let target = if (count as f64) / total < threshold { OTHERS } else { layer.as_str() };
            (layer.clone(), target.to_string())
        })
        .collect()
}

/// FloorplanCAD import adapter. Elements carry `semantic-id="k"` with
/// k in 1..=35 naming class k-1; elements without one are background,
/// class 35. Anything else is rejected.
pub fn floorplancad_leaf(semantic_id: Option<&str>) -> Result<usize, LabelError> {
    let Some(raw) = semantic_id else { return Ok(35) };
    match raw.trim().parse::<usize>() {
        Ok(k) if (1..=35).contains(&k) => Ok(k - 1),
        _ => Err(LabelError::UnknownLeaf {
            leaf: format!("semantic-id `{raw}`"),
            suggestions: vec!["an integer in 1..=35".into()],
        }),
    }
}
