//! Relationship classes.
//!
//! A class is the unordered pair of content categories plus how the two
//! ends are granular. Pairs across categories have four granularity combos
//! (the lower category's end first). Pairs within one category also
//! distinguish whether a segment sits in the same cell as the other end,
//! giving five combos. 3·4 + 3·5 = 27 classes, of which the eight
//! text–code and text–output classes are rendered.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::notebook::CellKind;
use crate::relationship::{aggregate, Granularity, Relationship, RelationshipSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CategoryPair {
    TextText,
    TextCode,
    TextOutput,
    CodeCode,
    CodeOutput,
    OutputOutput,
}

impl CategoryPair {
    pub const ALL: [CategoryPair; 6] = [
        CategoryPair::TextText,
        CategoryPair::TextCode,
        CategoryPair::TextOutput,
        CategoryPair::CodeCode,
        CategoryPair::CodeOutput,
        CategoryPair::OutputOutput,
    ];

    #[must_use]
    pub fn of(a: CellKind, b: CellKind) -> Self {
        use CellKind::*;
        match (a.min(b), a.max(b)) {
            (Text, Text) => CategoryPair::TextText,
            (Text, Code) => CategoryPair::TextCode,
            (Text, Output) => CategoryPair::TextOutput,
            (Code, Code) => CategoryPair::CodeCode,
            (Code, Output) => CategoryPair::CodeOutput,
            (Output, Output) | (Output, _) | (Code, Text) => CategoryPair::OutputOutput,
        }
    }

    #[must_use]
    pub fn is_intra(self) -> bool {
        matches!(self, CategoryPair::TextText | CategoryPair::CodeCode | CategoryPair::OutputOutput)
    }

    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            CategoryPair::TextText => "text-text",
            CategoryPair::TextCode => "text-code",
            CategoryPair::TextOutput => "text-output",
            CategoryPair::CodeCode => "code-code",
            CategoryPair::CodeOutput => "code-output",
            CategoryPair::OutputOutput => "output-output",
        }
    }

    /// Granularity combos that exist for this pair.
    #[must_use]
    pub fn combos(self) -> &'static [GranularityCombo] {
        use GranularityCombo::*;
        if self.is_intra() {
            &[CellCell, CellSegmentSameCell, CellSegmentCrossCell, SegmentSegmentSameCell, SegmentSegmentCrossCell]
        } else {
            &[CellCell, CellSegment, SegmentCell, SegmentSegmentCrossCell]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GranularityCombo {
    CellCell,
    CellSegment,
    SegmentCell,
    CellSegmentSameCell,
    CellSegmentCrossCell,
    SegmentSegmentSameCell,
    SegmentSegmentCrossCell,
}

impl GranularityCombo {
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            GranularityCombo::CellCell => "cell-cell",
            GranularityCombo::CellSegment => "cell-segment",
            GranularityCombo::SegmentCell => "segment-cell",
            GranularityCombo::CellSegmentSameCell => "cell-segment-sameCell",
            GranularityCombo::CellSegmentCrossCell => "cell-segment-crossCell",
            GranularityCombo::SegmentSegmentSameCell => "segment-segment-sameCell",
            GranularityCombo::SegmentSegmentCrossCell => "segment-segment-crossCell",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaxonomyClass {
    pub category_pair: CategoryPair,
    pub granularity_combo: GranularityCombo,
    pub in_scope: bool,
}

impl TaxonomyClass {
    #[must_use]
    pub fn new(category_pair: CategoryPair, granularity_combo: GranularityCombo) -> Self {
        let in_scope = matches!(category_pair, CategoryPair::TextCode | CategoryPair::TextOutput);
        Self { category_pair, granularity_combo, in_scope }
    }
}

impl fmt::Display for TaxonomyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.category_pair.as_str(), self.granularity_combo.as_str())
    }
}

impl Serialize for TaxonomyClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every class of the relationship space, built from the category and
/// granularity tables.
#[must_use]
pub fn all_classes() -> Vec<TaxonomyClass> {
    CategoryPair::ALL.iter().flat_map(|&p| p.combos().iter().map(move |&g| TaxonomyClass::new(p, g))).collect()
}

/// Classifies a structurally valid relationship by its declared cell types.
#[must_use]
pub fn classify(r: &Relationship) -> TaxonomyClass {
    use Granularity::{Cell, Segment};
    use GranularityCombo::*;

    let pair = CategoryPair::of(r.source.cell_type, r.target.cell_type);
    let combo = if pair.is_intra() {
        let same_cell = r.source.cell_id == r.target.cell_id;
        match (r.source.granularity_type, r.target.granularity_type, same_cell) {
            (Cell, Cell, _) => CellCell,
            (Cell, Segment, true) | (Segment, Cell, true) => CellSegmentSameCell,
            (Cell, Segment, false) | (Segment, Cell, false) => CellSegmentCrossCell,
            (Segment, Segment, true) => SegmentSegmentSameCell,
            (Segment, Segment, false) => SegmentSegmentCrossCell,
        }
    } else {
        let (lo, hi) =
            if r.source.cell_type < r.target.cell_type { (&r.source, &r.target) } else { (&r.target, &r.source) };
        match (lo.granularity_type, hi.granularity_type) {
            (Cell, Cell) => CellCell,
            (Cell, Segment) => CellSegment,
            (Segment, Cell) => SegmentCell,
            (Segment, Segment) => SegmentSegmentCrossCell,
        }
    };
    TaxonomyClass::new(pair, combo)
}

/// Class distribution of a relationship set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TaxonomyStats {
    pub distribution: BTreeMap<TaxonomyClass, usize>,
    /// |R|
    pub relationships: usize,
    /// |R′|, distinct cell pairs
    pub aggregated: usize,
    pub in_scope: usize,
}

#[must_use]
pub fn stats(rels: &RelationshipSet) -> TaxonomyStats {
    let mut distribution = BTreeMap::new();
    let mut in_scope = 0;
    for r in rels.iter() {
        let class = classify(r);
        in_scope += usize::from(class.in_scope);
        *distribution.entry(class).or_insert(0) += 1;
    }
    TaxonomyStats { distribution, relationships: rels.len(), aggregated: aggregate(rels).len(), in_scope }
}
