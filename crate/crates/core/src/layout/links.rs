use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::config::LayoutConfig;
use crate::notebook::{CellId, CellKind};
use crate::relationship::AggregatedRelationship;
use crate::units::Lu;

use super::{LayoutError, PlacedCell};

/// A cubic curve across the column gap, from the middle of a text cell's
/// right edge to the middle of a right cell's left edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkGeometry {
    pub pair: AggregatedRelationship,
    pub text_cell: CellId,
    pub right_cell: CellId,
    pub from_point: [Lu; 2],
    pub to_point: [Lu; 2],
    /// Control points of the cubic curve.
    pub curve: [[Lu; 2]; 2],
}

/// One link per pair, ordered top to bottom.
pub fn route_links(
    cells: &[PlacedCell],
    pairs: &[AggregatedRelationship],
    cfg: &LayoutConfig,
) -> Result<Vec<LinkGeometry>, LayoutError> {
    let by_id: HashMap<&CellId, &PlacedCell> = cells.iter().map(|c| (&c.cell_id, c)).collect();
    let lookup = |id: &CellId| by_id.get(id).copied().ok_or_else(|| LayoutError::UnknownCell(id.clone()));
    let from_x = cfg.left_column_width;
    let to_x = cfg.left_column_width + cfg.column_gap;
    let bend = cfg.column_gap / 2.0;

    let mut links = Vec::with_capacity(pairs.len());
    for p in pairs {
        let (text, right) = match (p.first().kind(), p.second().kind()) {
            (CellKind::Text, k) if k != CellKind::Text => (p.first(), p.second()),
            (k, CellKind::Text) if k != CellKind::Text => (p.second(), p.first()),
            _ => return Err(LayoutError::UnsupportedPair(p.clone())),
        };
        let from_y = lookup(text)?.mid_y();
        let to_y = lookup(right)?.mid_y();
        links.push(LinkGeometry {
            pair: p.clone(),
            text_cell: text.clone(),
            right_cell: right.clone(),
            from_point: [from_x, from_y],
            to_point: [to_x, to_y],
            curve: [[from_x + bend, from_y], [to_x - bend, to_y]],
        });
    }
    links.sort_by(|a, b| {
        a.from_point[1]
            .total_cmp(&b.from_point[1])
            .then(a.to_point[1].total_cmp(&b.to_point[1]))
            .then_with(|| a.pair.cmp(&b.pair))
    });
    Ok(links)
}
