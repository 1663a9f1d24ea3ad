//! Cell height estimation.
//!
//! Heights are estimates, not typesetting: markdown is wrapped greedily on a
//! character budget, code and text outputs count physical lines, images are
//! scaled to the right column's content width.

use std::collections::HashMap;

use crate::config::LayoutConfig;
use crate::notebook::{Cell, CellId, CellKind, NotebookDoc, OutputPayload};
use crate::units::Lu;

/// Number of lines `source` occupies when wrapped at `width / char_width`
/// characters per line. Runs of whitespace count as one space; words longer
/// than a line are broken. Never returns 0.
#[must_use]
pub fn wrapped_line_count(source: &str, width: Lu, char_width: Lu) -> usize {
    let budget = ((width.get() / char_width.get()).floor() as usize).max(1);
    let mut total = 0;
    for line in source.lines() {
        let mut lines = 1;
        let mut cur = 0;
        let mut place = |w: usize, lines: &mut usize| {
            if cur == 0 {
                cur = w;
            } else if cur + 1 + w <= budget {
                cur += 1 + w;
            } else {
                *lines += 1;
                cur = w;
            }
        };
        for word in line.split_whitespace() {
            let mut w = word.chars().count();
            while w > budget {
                place(budget, &mut lines);
                w -= budget;
            }
            if w > 0 {
                place(w, &mut lines);
            }
        }
        total += lines;
    }
    total.max(1)
}

fn physical_lines(s: &str) -> usize {
    s.lines().count().max(1)
}

fn payload_height(p: &OutputPayload, cfg: &LayoutConfig) -> Lu {
    match (&p.image_dims, &p.text_content) {
        (Some(d), _) => Lu(f64::from(d.height)) * (cfg.right_content_width().get() / f64::from(d.width)),
        (None, Some(text)) => cfg.line_height * physical_lines(text) as f64,
        (None, None) => Lu::ZERO,
    }
}

/// Content height of one cell, never below `cfg.min_cell_height`.
#[must_use]
pub fn measure_cell(cell: &Cell, cfg: &LayoutConfig) -> Lu {
    let body = match cell.kind {
        CellKind::Text => {
            cfg.line_height * wrapped_line_count(&cell.source, cfg.left_text_width(), cfg.avg_char_width) as f64
        }
        CellKind::Code => cfg.line_height * physical_lines(&cell.source) as f64,
        CellKind::Output => cell.output_payloads.iter().map(|p| payload_height(p, cfg)).sum(),
    };
    (body + cfg.cell_padding * 2.0).max(cfg.min_cell_height)
}

/// Measures every cell of a notebook.
#[must_use]
pub fn measure_all(nb: &NotebookDoc, cfg: &LayoutConfig) -> HashMap<CellId, Lu> {
    nb.cells().iter().map(|c| (c.id.clone(), measure_cell(c, cfg))).collect()
}
