//! Cross-checking a relationship set against its notebook.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::notebook::NotebookDoc;
use crate::relationship::{ContentAnchor, RelationshipSet, Side, Sketch};
use crate::taxonomy::classify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    /// Anchor names a cell that does not exist.
    D1,
    /// Declared cell type differs from the referenced cell's kind.
    D2,
    /// Span runs past the end of the cell source.
    D3,
    /// Bounding box leaves the sketch's view box.
    D4,
    /// Class is outside the rendered text–code/text–output space.
    D5,
    /// Same pair of anchors declared again.
    D6,
}

impl Rule {
    #[must_use]
    pub fn severity(self) -> Severity {
        match self {
            Rule::D5 | Rule::D6 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: Rule,
    /// Index into the relationship file.
    pub relationship: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}[{:?}] relationship {}", self.rule, self.relationship)?;
        if let Some(side) = self.side {
            write!(f, " {side}")?;
        }
        write!(f, ": {}", self.message)
    }
}

fn diag(rule: Rule, relationship: usize, side: Option<Side>, message: String) -> Diagnostic {
    Diagnostic { severity: rule.severity(), rule, relationship, side, message }
}

fn check_anchor(nb: &NotebookDoc, index: usize, side: Side, a: &ContentAnchor, out: &mut Vec<Diagnostic>) {
    let Some(cell) = nb.get(&a.cell_id) else {
        out.push(diag(Rule::D1, index, Some(side), format!("cell {} does not exist", a.cell_id)));
        return;
    };
    if cell.kind != a.cell_type {
        out.push(diag(
            Rule::D2,
            index,
            Some(side),
            format!("cell {} is {} but the anchor declares {}", a.cell_id, cell.kind, a.cell_type),
        ));
        return;
    }
    if let Some(span) = a.span_pos {
        let len = cell.char_len();
        if span.end() > len {
            out.push(diag(
                Rule::D3,
                index,
                Some(side),
                format!("span {}+{} exceeds the {len} characters of {}", span.start, span.length, a.cell_id),
            ));
        }
    }
    if let (Some(Sketch::Bbox(b)), Some(view)) = (&a.sketch, a.view_size) {
        if b.x < 0.0 || b.y < 0.0 || b.x + b.width > view.width || b.y + b.height > view.height {
            out.push(diag(
                Rule::D4,
                index,
                Some(side),
                format!(
                    "bbox [{}, {}, {}, {}] leaves the {}x{} view",
                    b.x, b.y, b.width, b.height, view.width, view.height
                ),
            ));
        }
    }
}

/// Unordered identity of a relationship, for duplicate detection.
fn identity(r: &crate::relationship::Relationship) -> (String, String) {
    let a = serde_json::to_string(&r.source).expect("anchor serializes");
    let b = serde_json::to_string(&r.target).expect("anchor serializes");
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Lists every problem in `rels` with respect to `nb`, in relationship order.
#[must_use]
pub fn validate(rels: &RelationshipSet, nb: &NotebookDoc) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, r) in rels.iter().enumerate() {
        check_anchor(nb, i, Side::Source, &r.source, &mut out);
        check_anchor(nb, i, Side::Target, &r.target, &mut out);
        let class = classify(r);
        if !class.in_scope {
            out.push(diag(Rule::D5, i, None, format!("{class} relationships are counted but not rendered")));
        }
        if !seen.insert(identity(r)) {
            out.push(diag(Rule::D6, i, None, "duplicates an earlier relationship".to_owned()));
        }
    }
    out
}

#[must_use]
pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Indices of the relationships that get drawn: in scope, first occurrence.
#[must_use]
pub fn renderable(rels: &RelationshipSet) -> Vec<usize> {
    let mut seen = HashSet::new();
    rels.iter()
        .enumerate()
        .filter(|(_, r)| classify(r).in_scope)
        .filter(|(_, r)| seen.insert(identity(r)))
        .map(|(i, _)| i)
        .collect()
}
