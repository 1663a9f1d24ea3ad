//! Side-by-side placement.
//!
//! Text cells go in the left column, code and output cells in the right
//! column, each column in notebook order. A text related to right cells is
//! aligned with the earliest of them when the left column allows it and is
//! cut to the height of its related cells; a text with no relations fills
//! the slot beside the next free right cell or falls back to a fixed height.
//! Blank spacers in the right column keep anchors level with their texts.

mod cues;
mod links;
mod sweep;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cues::{annotate_cues, cue_styles, CellCues, Cue, CueKind, CueStyle, UnderlineColor};
pub use links::{route_links, LinkGeometry};
pub use sweep::{compute_layout, Layout};

use crate::config::{ConfigError, LayoutConfig};
use crate::notebook::{CellId, CellKind};
use crate::relationship::AggregatedRelationship;
use crate::units::Lu;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Left,
    Right,
}

impl Column {
    #[must_use]
    pub fn of(kind: CellKind) -> Self {
        if kind == CellKind::Text {
            Column::Left
        } else {
            Column::Right
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlacedCell {
    pub cell_id: CellId,
    pub column: Column,
    pub y: Lu,
    pub height: Lu,
    pub content_height: Lu,
    /// Content is taller than the visible box.
    pub scrollable: bool,
}

impl PlacedCell {
    #[must_use]
    pub fn bottom(&self) -> Lu {
        self.y + self.height
    }

    #[must_use]
    pub fn mid_y(&self) -> Lu {
        self.y + self.height / 2.0
    }
}

/// Blank vertical space in a column, directly above `before`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Spacer {
    pub column: Column,
    pub y: Lu,
    pub height: Lu,
    pub before: CellId,
}

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("relationship names unknown cell {0}")]
    UnknownCell(CellId),
    #[error("no measured height for cell {0}")]
    MissingHeight(CellId),
    #[error("pair {0} does not join a text cell to a code or output cell")]
    UnsupportedPair(AggregatedRelationship),
}

/// Everything the viewer needs to draw the side-by-side view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutDocument {
    pub config: LayoutConfig,
    pub total_height: Lu,
    pub placed_cells: Vec<PlacedCell>,
    pub spacers: Vec<Spacer>,
    pub links: Vec<LinkGeometry>,
    pub cue_annotations: Vec<CellCues>,
}

impl LayoutDocument {
    #[must_use]
    pub fn placed(&self, id: &CellId) -> Option<&PlacedCell> {
        self.placed_cells.iter().find(|c| &c.cell_id == id)
    }

    /// Positions by cell id.
    #[must_use]
    pub fn index(&self) -> HashMap<&CellId, &PlacedCell> {
        self.placed_cells.iter().map(|c| (&c.cell_id, c)).collect()
    }
}
