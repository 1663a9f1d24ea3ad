//! Side-by-side rendering of computational notebooks.
//!
//! A notebook is flattened into text, code and output cells; a relationship
//! file links cells or segments of them. The crate validates and classifies
//! relationships, lays the notebook out in two columns (text on the left,
//! code and outputs on the right) with related cells aligned, routes link
//! curves between related cells and emits the result as JSON or as a static
//! interactive page.

pub mod bundle;
pub mod config;
pub mod layout;
pub mod measure;
pub mod notebook;
pub mod pipeline;
pub mod relationship;
pub mod synth;
pub mod taxonomy;
pub mod units;
pub mod validate;

pub use bundle::{
    emit_html, emit_layout_json, layout_json, BundleManifest, BundleOptions, EmitError, LayoutMode, ViewerAssets,
};
pub use config::{ConfigError, LayoutConfig, LayoutConfigPatch};
pub use layout::{
    annotate_cues, compute_layout, route_links, CellCues, Column, Cue, CueKind, Layout, LayoutDocument, LayoutError,
    LinkGeometry, PlacedCell, Spacer,
};
pub use measure::{measure_all, measure_cell};
pub use notebook::{parse_notebook, parse_notebook_bytes, Cell, CellId, CellKind, NotebookDoc, NotebookParseError};
pub use pipeline::{render, PipelineError, Rendering};
pub use relationship::{
    aggregate, aggregate_in, parse_relationships, parse_relationships_str, AggregatedRelationship, ContentAnchor,
    Relationship, RelationshipParseError, RelationshipSet,
};
pub use taxonomy::{all_classes, classify, stats, TaxonomyClass, TaxonomyStats};
pub use units::Lu;
pub use validate::{validate, Diagnostic, Rule, Severity};
