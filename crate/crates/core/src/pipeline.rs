//! Parse-to-layout pipeline shared by the command line and the tests.

use thiserror::Error;

use crate::config::LayoutConfig;
use crate::layout::{annotate_cues, compute_layout, route_links, LayoutDocument, LayoutError};
use crate::measure::measure_all;
use crate::notebook::NotebookDoc;
use crate::relationship::{aggregate_in, AggregatedRelationship, RelationshipSet};
use crate::validate::{has_errors, renderable, validate, Diagnostic};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("relationships have {} error(s)", .0.iter().filter(|d| d.severity == crate::validate::Severity::Error).count())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// A laid-out notebook with the facts gathered on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendering {
    pub layout: LayoutDocument,
    /// Warnings left after validation.
    pub diagnostics: Vec<Diagnostic>,
    /// Indices of the relationships that were drawn.
    pub rendered: Vec<usize>,
    /// Cell pairs behind the links.
    pub pairs: Vec<AggregatedRelationship>,
}

/// Validates, measures and lays out `nb` with its relationships.
///
/// Error-severity diagnostics stop the pipeline before layout.
pub fn render(nb: &NotebookDoc, rels: &RelationshipSet, cfg: &LayoutConfig) -> Result<Rendering, PipelineError> {
    cfg.validate().map_err(LayoutError::from)?;
    let diagnostics = validate(rels, nb);
    if has_errors(&diagnostics) {
        return Err(PipelineError::Invalid(diagnostics));
    }
    let heights = measure_all(nb, cfg);
    let rendered = renderable(rels);
    let pairs = aggregate_in(&rels.subset(&rendered), nb);
    let placed = compute_layout(nb, &heights, &pairs, cfg)?;
    let links = route_links(&placed.placed_cells, &pairs, cfg)?;
    let cue_annotations = annotate_cues(nb, rels, &rendered, cfg);
    let layout = LayoutDocument {
        config: *cfg,
        total_height: placed.total_height,
        placed_cells: placed.placed_cells,
        spacers: placed.spacers,
        links,
        cue_annotations,
    };
    Ok(Rendering { layout, diagnostics, rendered, pairs })
}
