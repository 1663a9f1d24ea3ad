use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::config::LayoutConfig;
use crate::notebook::{CellId, CellKind, NotebookDoc};
use crate::relationship::{BBox, ContentAnchor, Granularity, RelationshipSet, Sketch};
use crate::units::Lu;

/// What a text underline points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnderlineColor {
    CodeRelated,
    OutputRelated,
    Both,
    CodeSegment,
}

impl UnderlineColor {
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            UnderlineColor::CodeRelated => "code-related",
            UnderlineColor::OutputRelated => "output-related",
            UnderlineColor::Both => "both",
            UnderlineColor::CodeSegment => "code-segment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum CueKind {
    /// Dashed border around the whole cell.
    WholeCell,
    /// Underline of a character span of the cell source.
    #[serde(rename_all = "camelCase")]
    Underline { start: usize, length: usize, color: UnderlineColor, fragment: String },
    /// Overlay on an output, in the output's displayed coordinates.
    #[serde(rename_all = "camelCase")]
    Sketch {
        #[serde(skip_serializing_if = "Option::is_none")]
        bbox: Option<BBox>,
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        /// Factor from sketch coordinates to displayed coordinates.
        scale: Lu,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cue {
    /// Indices into the relationship file of every relationship drawing this cue.
    pub relationships: Vec<usize>,
    #[serde(flatten)]
    pub kind: CueKind,
}

/// The cues drawn on one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellCues {
    pub cell_id: CellId,
    pub cues: Vec<Cue>,
}

/// Classes the viewer applies for a cue at rest and while its relation is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CueStyle {
    pub idle_class: &'static str,
    pub active_class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<&'static str>,
}

/// Style table keyed by cue kind or underline color.
#[must_use]
pub fn cue_styles() -> BTreeMap<&'static str, CueStyle> {
    let s = |idle_class, active_class, color| CueStyle { idle_class, active_class, color };
    BTreeMap::from([
        ("wholeCell", s("il-cell-dashed", "il-cell-active", None)),
        ("sketch", s("il-sketch-dashed", "il-sketch-active", None)),
        ("code-related", s("il-underline-code", "il-underline-active", Some("#2563eb"))),
        ("output-related", s("il-underline-output", "il-underline-active", Some("#16a34a"))),
        ("both", s("il-underline-both", "il-underline-active", Some("#9333ea"))),
        ("code-segment", s("il-underline-code-segment", "il-underline-active", Some("#16a34a"))),
    ])
}

fn fragment(source: &str, start: usize, length: usize) -> String {
    source.chars().skip(start).take(length).collect()
}

fn scaled(b: &BBox, k: f64) -> BBox {
    BBox { x: b.x * k, y: b.y * k, width: b.width * k, height: b.height * k, angle_degrees: b.angle_degrees }
}

/// Builds the visual cues of the relationships at `rendered` (indices into
/// `rels`), grouped by cell in notebook order. Anchors shared by several
/// relationships give one cue.
#[must_use]
pub fn annotate_cues(
    nb: &NotebookDoc,
    rels: &RelationshipSet,
    rendered: &[usize],
    cfg: &LayoutConfig,
) -> Vec<CellCues> {
    let all: Vec<_> = rels.iter().collect();
    let mut cues: Vec<(CellId, Cue)> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    let mut partners: HashMap<usize, (bool, bool)> = HashMap::new();

    for &ri in rendered {
        let r = all[ri];
        for (anchor, other) in [(&r.source, &r.target), (&r.target, &r.source)] {
            let Some(cell) = nb.get(&anchor.cell_id) else { continue };
            let key = format!(
                "{}|{}",
                anchor.cell_id,
                serde_json::to_string(&(anchor.granularity_type, anchor.span_pos, &anchor.sketch))
                    .expect("anchor serializes")
            );
            let at = *by_key.entry(key).or_insert_with(|| {
                let cue = Cue { relationships: Vec::new(), kind: cue_kind(anchor, &cell.source, cfg) };
                cues.push((anchor.cell_id.clone(), cue));
                cues.len() - 1
            });
            let cue = &mut cues[at].1;
            if cue.relationships.last() != Some(&ri) {
                cue.relationships.push(ri);
            }
            let seen = partners.entry(at).or_default();
            match other.cell_type {
                CellKind::Code => seen.0 = true,
                CellKind::Output => seen.1 = true,
                CellKind::Text => {}
            }
        }
    }
    for (at, (code, output)) in partners {
        if let CueKind::Underline { color, .. } = &mut cues[at].1.kind {
            if *color != UnderlineColor::CodeSegment {
                *color = match (code, output) {
                    (true, true) => UnderlineColor::Both,
                    (false, true) => UnderlineColor::OutputRelated,
                    _ => UnderlineColor::CodeRelated,
                };
            }
        }
    }
    let mut per_cell: Vec<CellCues> = Vec::new();
    cues.sort_by_key(|(id, _)| nb.ordinal(id));
    for (cell_id, cue) in cues {
        match per_cell.last_mut() {
            Some(last) if last.cell_id == cell_id => last.cues.push(cue),
            _ => per_cell.push(CellCues { cell_id, cues: vec![cue] }),
        }
    }
    per_cell
}

fn cue_kind(anchor: &ContentAnchor, source: &str, cfg: &LayoutConfig) -> CueKind {
    if anchor.granularity_type == Granularity::Cell {
        return CueKind::WholeCell;
    }
    if let Some(span) = anchor.span_pos {
        let color =
            if anchor.cell_type == CellKind::Code { UnderlineColor::CodeSegment } else { UnderlineColor::CodeRelated };
        return CueKind::Underline {
            start: span.start,
            length: span.length,
            color,
            fragment: fragment(source, span.start, span.length),
        };
    }
    let view_width = anchor.view_size.map_or(1.0, |v| v.width);
    let k = cfg.right_content_width().get() / view_width;
    match &anchor.sketch {
        Some(Sketch::Bbox(b)) => CueKind::Sketch { bbox: Some(scaled(b, k)), path: None, scale: Lu(k) },
        Some(Sketch::Path(p)) => CueKind::Sketch { bbox: None, path: Some(p.clone()), scale: Lu(k) },
        None => CueKind::WholeCell,
    }
}
