//! Relationship files.
//!
//! A relationship pairs two anchors. An anchor names a cell and either the
//! whole cell or a segment of it: a character span for text and code, a
//! sketch (bounding box or SVG path) for outputs. The file is a JSON array of
//! `{"source": anchor, "target": anchor}` objects; unknown fields are
//! rejected.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::notebook::{CellId, CellKind, NotebookDoc};
use crate::units::serialize_minimal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Cell,
    Segment,
}

/// Character span in the raw cell source (Unicode scalar values).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanPos {
    pub start: usize,
    pub length: usize,
}

impl SpanPos {
    #[must_use]
    pub fn end(&self) -> usize {
        self.start.saturating_add(self.length)
    }
}

/// Rotated rectangle in view-size coordinates, stored as `[x, y, w, h, angle]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub angle_degrees: f64,
}

impl Serialize for BBox {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(5))?;
        for v in [self.x, self.y, self.width, self.height, self.angle_degrees] {
            seq.serialize_element(&Minimal(v))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BBox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y, width, height, angle_degrees] = <[f64; 5]>::deserialize(d)?;
        Ok(BBox { x, y, width, height, angle_degrees })
    }
}

struct Minimal(f64);

impl Serialize for Minimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_minimal(self.0, s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sketch {
    Bbox(BBox),
    Path(String),
}

/// Size of the SVG canvas a sketch was drawn on, stored as `[w, h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewSize {
    pub width: f64,
    pub height: f64,
}

impl Serialize for ViewSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Minimal(self.width))?;
        seq.serialize_element(&Minimal(self.height))?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ViewSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [width, height] = <[f64; 2]>::deserialize(d)?;
        Ok(ViewSize { width, height })
    }
}

/// One endpoint of a relationship.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContentAnchor {
    pub cell_id: CellId,
    pub cell_type: CellKind,
    pub granularity_type: Granularity,
    #[serde(default, deserialize_with = "nullable")]
    pub span_pos: Option<SpanPos>,
    #[serde(default, deserialize_with = "nullable")]
    pub sketch: Option<Sketch>,
    #[serde(default, deserialize_with = "nullable")]
    pub view_size: Option<ViewSize>,
}

fn nullable<'de, D: Deserializer<'de>, T: Deserialize<'de>>(d: D) -> Result<Option<T>, D::Error> {
    Option::<T>::deserialize(d)
}

impl ContentAnchor {
    #[must_use]
    pub fn cell(cell_id: CellId, cell_type: CellKind) -> Self {
        Self { cell_id, cell_type, granularity_type: Granularity::Cell, span_pos: None, sketch: None, view_size: None }
    }

    #[must_use]
    pub fn span(cell_id: CellId, cell_type: CellKind, start: usize, length: usize) -> Self {
        Self {
            cell_id,
            cell_type,
            granularity_type: Granularity::Segment,
            span_pos: Some(SpanPos { start, length }),
            sketch: None,
            view_size: None,
        }
    }

    #[must_use]
    pub fn sketch(cell_id: CellId, sketch: Sketch, view: ViewSize) -> Self {
        Self {
            cell_id,
            cell_type: CellKind::Output,
            granularity_type: Granularity::Segment,
            span_pos: None,
            sketch: Some(sketch),
            view_size: Some(view),
        }
    }

    #[must_use]
    pub fn is_segment(&self) -> bool {
        self.granularity_type == Granularity::Segment
    }

    /// Checks the field combinations allowed for this anchor's granularity and
    /// cell type. Returns the offending field and a reason.
    pub fn check(&self) -> Result<(), (&'static str, String)> {
        match (self.granularity_type, self.cell_type) {
            (Granularity::Cell, _) => {
                if self.span_pos.is_some() {
                    return Err(("spanPos", "must be null for granularityType \"cell\"".into()));
                }
                if self.sketch.is_some() {
                    return Err(("sketch", "must be null for granularityType \"cell\"".into()));
                }
            }
            (Granularity::Segment, CellKind::Text | CellKind::Code) => {
                if self.span_pos.is_none() {
                    return Err(("spanPos", format!("is required for a {} segment", self.cell_type)));
                }
                if self.sketch.is_some() {
                    return Err(("sketch", format!("must be null for a {} segment", self.cell_type)));
                }
            }
            (Granularity::Segment, CellKind::Output) => {
                if self.span_pos.is_some() {
                    return Err(("spanPos", "must be null for an output segment".into()));
                }
                if self.sketch.is_none() {
                    return Err(("sketch", "is required for an output segment".into()));
                }
                if self.view_size.is_none() {
                    return Err(("viewSize", "is required for an output segment".into()));
                }
            }
        }
        if let Some(span) = self.span_pos {
            if span.length == 0 {
                return Err(("spanPos", "length must be at least 1".into()));
            }
        }
        match &self.sketch {
            Some(Sketch::Bbox(b)) => {
                let finite = [b.x, b.y, b.width, b.height, b.angle_degrees].iter().all(|v| v.is_finite());
                if !finite || b.width <= 0.0 || b.height <= 0.0 {
                    return Err(("sketch", "bbox needs finite values and positive width and height".into()));
                }
            }
            Some(Sketch::Path(p)) if p.trim().is_empty() => {
                return Err(("sketch", "path must not be empty".into()));
            }
            _ => {}
        }
        if let Some(v) = self.view_size {
            if !(v.width.is_finite() && v.height.is_finite() && v.width > 0.0 && v.height > 0.0) {
                return Err(("viewSize", "dimensions must be positive".into()));
            }
        }
        Ok(())
    }
}

/// A declared link between two anchors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relationship {
    pub source: ContentAnchor,
    pub target: ContentAnchor,
}

impl Relationship {
    #[must_use]
    pub fn new(source: ContentAnchor, target: ContentAnchor) -> Self {
        Self { source, target }
    }

    /// The cell pair this relationship aggregates to, if the two cells differ.
    #[must_use]
    pub fn cell_pair(&self) -> Option<AggregatedRelationship> {
        AggregatedRelationship::new(self.source.cell_id.clone(), self.target.cell_id.clone())
    }
}

/// Which end of a relationship a diagnostic or error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// The declared relationships of one notebook, in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RelationshipSet {
    pub relationships: Vec<Relationship>,
    pub notebook_ref: Option<String>,
}

impl RelationshipSet {
    #[must_use]
    pub fn new(relationships: Vec<Relationship>) -> Self {
        Self { relationships, notebook_ref: None }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.relationships.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.relationships.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter()
    }

    #[must_use]
    pub fn get(&self, index: usize) -> Option<&Relationship> {
        self.relationships.get(index)
    }

    /// The relationships at `indices`, in that order.
    #[must_use]
    pub fn subset(&self, indices: &[usize]) -> RelationshipSet {
        let relationships = indices.iter().filter_map(|&i| self.get(i).cloned()).collect();
        Self { relationships, notebook_ref: self.notebook_ref.clone() }
    }

    /// Serializes in the relationship file format (pretty, two-space indent).
    #[must_use]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.relationships).expect("relationships serialize")
    }
}

/// Unordered pair of distinct cell ids, stored with the smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[CellId; 2]", into = "[CellId; 2]")]
pub struct AggregatedRelationship {
    first: CellId,
    second: CellId,
}

impl AggregatedRelationship {
    /// Returns `None` when both ids are the same cell.
    #[must_use]
    pub fn new(a: CellId, b: CellId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { first: a, second: b }),
            std::cmp::Ordering::Greater => Some(Self { first: b, second: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    #[must_use]
    pub fn first(&self) -> &CellId {
        &self.first
    }

    #[must_use]
    pub fn second(&self) -> &CellId {
        &self.second
    }

    #[must_use]
    pub fn contains(&self, id: &CellId) -> bool {
        &self.first == id || &self.second == id
    }

    /// The other member of the pair, if `id` is one of them.
    #[must_use]
    pub fn other(&self, id: &CellId) -> Option<&CellId> {
        if &self.first == id {
            Some(&self.second)
        } else if &self.second == id {
            Some(&self.first)
        } else {
            None
        }
    }
}

impl TryFrom<[CellId; 2]> for AggregatedRelationship {
    type Error = String;
    fn try_from([a, b]: [CellId; 2]) -> Result<Self, Self::Error> {
        Self::new(a, b).ok_or_else(|| "aggregated pair needs two distinct cells".to_owned())
    }
}

impl From<AggregatedRelationship> for [CellId; 2] {
    fn from(p: AggregatedRelationship) -> Self {
        [p.first, p.second]
    }
}

impl fmt::Display for AggregatedRelationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

#[derive(Debug, Error)]
pub enum RelationshipParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column} at `{path}`: {message}")]
    Syntax { line: usize, column: usize, path: String, message: String },
    #[error("relationship {index} {side}.{field} {message}")]
    Invalid { index: usize, side: Side, field: &'static str, message: String },
    #[error("relationship {index} links cell {cell} to itself")]
    SelfRelationship { index: usize, cell: CellId },
}

impl RelationshipParseError {
    /// JSON path of the offending value, e.g. `[3].source.spanPos`.
    #[must_use]
    pub fn json_path(&self) -> Option<String> {
        match self {
            Self::Io { .. } => None,
            Self::Syntax { path, .. } => Some(path.clone()),
            Self::Invalid { index, side, field, .. } => Some(format!("[{index}].{side}.{field}")),
            Self::SelfRelationship { index, .. } => Some(format!("[{index}]")),
        }
    }
}

/// Reads and parses a relationship file.
pub fn parse_relationships(path: &Path) -> Result<RelationshipSet, RelationshipParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| RelationshipParseError::Io { path: path.display().to_string(), source })?;
    parse_relationships_str(&text)
}

/// Parses relationship JSON held in memory.
pub fn parse_relationships_str(text: &str) -> Result<RelationshipSet, RelationshipParseError> {
    let syntax = |path: String, e: serde_json::Error| RelationshipParseError::Syntax {
        line: e.line(),
        column: e.column(),
        path,
        message: e.to_string(),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let relationships: Vec<Relationship> = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        syntax(path, e.into_inner())
    })?;
    de.end().map_err(|e| syntax(".".into(), e))?;

    for (index, r) in relationships.iter().enumerate() {
        for (side, anchor) in [(Side::Source, &r.source), (Side::Target, &r.target)] {
            anchor.check().map_err(|(field, message)| RelationshipParseError::Invalid {
                index,
                side,
                field,
                message,
            })?;
        }
        if r.source.cell_id == r.target.cell_id
            && r.source.granularity_type == Granularity::Cell
            && r.target.granularity_type == Granularity::Cell
        {
            return Err(RelationshipParseError::SelfRelationship { index, cell: r.source.cell_id.clone() });
        }
    }
    Ok(RelationshipSet::new(relationships))
}

/// Distinct cell pairs of `rels`, in order of first appearance.
///
/// Relationships between two segments of the same cell have no pair and are
/// skipped.
#[must_use]
pub fn aggregate(rels: &RelationshipSet) -> Vec<AggregatedRelationship> {
    let mut seen = HashSet::new();
    rels.iter().filter_map(Relationship::cell_pair).filter(|p| seen.insert(p.clone())).collect()
}

/// Like [`aggregate`], but ordered by the notebook ordinals of the two cells
/// (earlier cell first, then later cell). Pairs naming unknown cells sort last.
#[must_use]
pub fn aggregate_in(rels: &RelationshipSet, nb: &NotebookDoc) -> Vec<AggregatedRelationship> {
    let mut pairs = aggregate(rels);
    let key = |p: &AggregatedRelationship| {
        let a = nb.ordinal(p.first()).unwrap_or(usize::MAX);
        let b = nb.ordinal(p.second()).unwrap_or(usize::MAX);
        (a.min(b), a.max(b))
    };
    pairs.sort_by_key(key);
    pairs
}
