use std::collections::HashMap;

use crate::config::LayoutConfig;
use crate::notebook::{CellId, CellKind, NotebookDoc};
use crate::relationship::AggregatedRelationship;
use crate::units::Lu;

use super::{Column, LayoutError, PlacedCell, Spacer};

/// Cell positions and spacers, before links and cues.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    /// One entry per cell, in notebook order.
    pub placed_cells: Vec<PlacedCell>,
    pub spacers: Vec<Spacer>,
    pub total_height: Lu,
}

struct Text {
    cell: usize,
    /// Related right-column positions, ascending.
    related: Vec<usize>,
}

struct Right {
    cell: usize,
    height: Lu,
    /// Number of texts whose earliest related cell this is.
    anchors: usize,
    /// Position in the text list of the last text anchored here.
    last_anchored: Option<usize>,
}

struct RightColumn<'a> {
    cells: &'a [Right],
    gap: Lu,
    tops: Vec<Option<Lu>>,
    spacers: Vec<(usize, Lu, Lu)>,
    /// Top of the next free slot.
    cursor: Lu,
    /// First unplaced cell.
    next: usize,
}

impl RightColumn<'_> {
    fn place(&mut self, j: usize, y: Lu) {
        debug_assert_eq!(j, self.next);
        self.tops[j] = Some(y);
        self.cursor = y + self.cells[j].height + self.gap;
        self.next = j + 1;
    }

    fn place_tight(&mut self, j: usize) {
        self.place(j, self.cursor);
    }

    /// Where `a` would land if everything up to it were packed tightly.
    fn natural_top(&self, a: usize) -> Lu {
        self.cursor + self.cells[self.next..a].iter().map(|r| r.height + self.gap).sum()
    }

    /// Places everything up to and including `a` so that `a` lands on `y`,
    /// opening a spacer above the first cell that anchors a text.
    fn place_through(&mut self, a: usize, y: Lu) {
        let natural = self.natural_top(a);
        let slack = y - natural;
        let split = (self.next..=a).find(|&j| self.cells[j].anchors > 0).unwrap_or(a);
        while self.next < split {
            self.place_tight(self.next);
        }
        if slack.get() > 0.0 {
            self.spacers.push((split, self.cursor, slack));
            self.cursor += slack;
        }
        while self.next <= a {
            self.place_tight(self.next);
        }
    }
}

/// Places every cell of `nb`.
///
/// `heights` holds the measured content height of each cell; `pairs` the
/// aggregated text-to-right relations to honour.
pub fn compute_layout(
    nb: &NotebookDoc,
    heights: &HashMap<CellId, Lu>,
    pairs: &[AggregatedRelationship],
    cfg: &LayoutConfig,
) -> Result<Layout, LayoutError> {
    cfg.validate()?;
    let gap = cfg.cell_gap;
    let cells = nb.cells();
    let content: Vec<Lu> = cells
        .iter()
        .map(|c| heights.get(&c.id).copied().ok_or_else(|| LayoutError::MissingHeight(c.id.clone())))
        .collect::<Result<_, _>>()?;

    // Column lists.
    let mut slot = vec![0usize; cells.len()];
    let mut texts = Vec::new();
    let mut rights = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if c.kind == CellKind::Text {
            slot[i] = texts.len();
            texts.push(Text { cell: i, related: Vec::new() });
        } else {
            slot[i] = rights.len();
            rights.push(Right { cell: i, height: content[i], anchors: 0, last_anchored: None });
        }
    }
    for p in pairs {
        let ord = |id: &CellId| nb.ordinal(id).ok_or_else(|| LayoutError::UnknownCell(id.clone()));
        let (a, b) = (ord(p.first())?, ord(p.second())?);
        let (t, r) = match (cells[a].kind, cells[b].kind) {
            (CellKind::Text, k) if k != CellKind::Text => (a, b),
            (k, CellKind::Text) if k != CellKind::Text => (b, a),
            _ => return Err(LayoutError::UnsupportedPair(p.clone())),
        };
        let related = &mut texts[slot[t]].related;
        if !related.contains(&slot[r]) {
            related.push(slot[r]);
        }
    }
    for (ti, t) in texts.iter_mut().enumerate() {
        t.related.sort_unstable();
        if let Some(&a) = t.related.first() {
            rights[a].anchors += 1;
            rights[a].last_anchored = Some(ti);
        }
    }
    // First right cell after each cell, by notebook position.
    let mut right_after = vec![rights.len(); cells.len() + 1];
    for i in (0..cells.len()).rev() {
        right_after[i] = if cells[i].kind == CellKind::Text { right_after[i + 1] } else { slot[i] };
    }
    // Last text anchored by any right cell before position j.
    let mut blocking = vec![None; rights.len() + 1];
    for j in 0..rights.len() {
        blocking[j + 1] = blocking[j].max(rights[j].last_anchored);
    }

    let mut col = RightColumn {
        cells: &rights,
        gap,
        tops: vec![None; rights.len()],
        spacers: Vec::new(),
        cursor: Lu::ZERO,
        next: 0,
    };
    let mut left_y = vec![Lu::ZERO; texts.len()];
    let mut left_h = vec![Lu::ZERO; texts.len()];
    let mut left_cursor = Lu::ZERO;

    for (ti, t) in texts.iter().enumerate() {
        let own = content[t.cell];
        let (y, h) = if let Some(&a) = t.related.first() {
            let cap: Lu = t.related.iter().map(|&j| rights[j].height).sum::<Lu>()
                + t.related.windows(2).filter(|w| w[1] == w[0] + 1).map(|_| gap).sum();
            let y = match col.tops[a] {
                Some(top) => left_cursor.max(top),
                None => {
                    let y = left_cursor.max(col.natural_top(a));
                    col.place_through(a, y);
                    y
                }
            };
            (y, own.min(cap))
        } else {
            let ord = t.cell;
            while col.next < rights.len() && rights[col.next].cell < ord && rights[col.next].anchors == 0 {
                col.place_tight(col.next);
            }
            let c = right_after[ord];
            let fits = c < rights.len()
                && c == col.next
                && rights[c].anchors == 0
                && blocking[c].is_none_or(|last| last <= ti)
                && col.cursor >= left_cursor;
            if fits {
                let y = col.cursor;
                col.place_tight(c);
                (y, own.min(rights[c].height))
            } else {
                (left_cursor, own.min(cfg.default_text_height))
            }
        };
        left_y[ti] = y;
        left_h[ti] = h;
        left_cursor = y + h + gap;
    }
    while col.next < rights.len() {
        col.place_tight(col.next);
    }

    let mut placed = Vec::with_capacity(cells.len());
    for (i, c) in cells.iter().enumerate() {
        let (column, y, height) = if c.kind == CellKind::Text {
            (Column::Left, left_y[slot[i]], left_h[slot[i]])
        } else {
            (Column::Right, col.tops[slot[i]].expect("all right cells placed"), content[i])
        };
        placed.push(PlacedCell {
            cell_id: c.id.clone(),
            column,
            y,
            height,
            content_height: content[i],
            scrollable: content[i] > height,
        });
    }
    let total_height = placed.iter().map(PlacedCell::bottom).fold(Lu::ZERO, Lu::max);
    let spacers = col
        .spacers
        .iter()
        .map(|&(j, y, height)| Spacer { column: Column::Right, y, height, before: cells[rights[j].cell].id.clone() })
        .collect();
    Ok(Layout { placed_cells: placed, spacers, total_height })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notebook::Cell;

    fn id(s: &str) -> CellId {
        s.parse().unwrap()
    }

    fn build(cells: &[(&str, f64)], pairs: &[(&str, &str)], cfg: &LayoutConfig) -> Layout {
        let nb = NotebookDoc::from_cells(
            cells
                .iter()
                .map(|(s, _)| Cell {
                    id: id(s),
                    kind: id(s).kind(),
                    source: String::new(),
                    output_payloads: vec![],
                    ordinal: 0,
                })
                .collect(),
            "t",
        )
        .unwrap();
        let heights = cells.iter().map(|(s, h)| (id(s), Lu(*h))).collect();
        let pairs: Vec<_> = pairs.iter().map(|(a, b)| AggregatedRelationship::new(id(a), id(b)).unwrap()).collect();
        compute_layout(&nb, &heights, &pairs, cfg).unwrap()
    }

    fn rows(l: &Layout) -> Vec<(String, f64, f64)> {
        l.placed_cells.iter().map(|c| (c.cell_id.to_string(), c.y.get(), c.height.get())).collect()
    }

    fn expect(l: &Layout, want: &[(&str, f64, f64)]) {
        let want: Vec<_> = want.iter().map(|(s, y, h)| (s.to_string(), *y, *h)).collect();
        assert_eq!(rows(l), want);
    }

    #[test]
    fn walkthrough_notebook() {
        let l = build(
            &[
                ("m1", 524.0),
                ("c1", 124.0),
                ("o1", 284.0),
                ("m2", 164.0),
                ("c2", 184.0),
                ("m3", 204.0),
                ("c3", 84.0),
                ("m4", 304.0),
                ("c4", 144.0),
                ("m5", 124.0),
            ],
            &[("m1", "c1"), ("m1", "o1"), ("m2", "c1"), ("m5", "c4")],
            &LayoutConfig::default(),
        );
        expect(
            &l,
            &[
                ("m1", 0.0, 424.0),
                ("c1", 0.0, 124.0),
                ("o1", 140.0, 284.0),
                ("m2", 440.0, 124.0),
                ("c2", 440.0, 184.0),
                ("m3", 640.0, 84.0),
                ("c3", 640.0, 84.0),
                ("m4", 740.0, 120.0),
                ("c4", 876.0, 144.0),
                ("m5", 876.0, 124.0),
            ],
        );
        assert_eq!(l.spacers, [Spacer { column: Column::Right, y: Lu(740.0), height: Lu(136.0), before: id("c4") }]);
        assert_eq!(l.total_height, Lu(1020.0));
        let scroll: Vec<_> = l.placed_cells.iter().filter(|c| c.scrollable).map(|c| c.cell_id.as_str()).collect();
        assert_eq!(scroll, ["m1", "m2", "m3", "m4"]);
    }

    #[test]
    fn contiguous_related_cells_share_their_gaps() {
        let cells = [("m1", 1000.0), ("c1", 100.0), ("o1", 80.0), ("c2", 120.0)];
        let pairs = [("m1", "c1"), ("m1", "o1"), ("m1", "c2")];
        let l = build(&cells, &pairs, &LayoutConfig::default());
        // 100 + 80 + 120 plus the two gaps inside the run
        assert_eq!(l.placed_cells[0].height, Lu(332.0));
        assert!(l.placed_cells[0].scrollable);

        // a gap in the related run is not credited
        let l = build(&cells, &[("m1", "c1"), ("m1", "c2")], &LayoutConfig::default());
        assert_eq!(l.placed_cells[0].height, Lu(220.0));
    }

    #[test]
    fn unrelated_text_beside_free_right_cell() {
        let l = build(&[("m1", 300.0), ("c1", 80.0), ("m2", 50.0), ("c2", 90.0)], &[], &LayoutConfig::default());
        expect(&l, &[("m1", 0.0, 80.0), ("c1", 0.0, 80.0), ("m2", 96.0, 50.0), ("c2", 96.0, 90.0)]);
    }

    #[test]
    fn unrelated_text_without_right_cell_gets_default_height() {
        let l = build(&[("m1", 300.0), ("m2", 60.0)], &[], &LayoutConfig::default());
        expect(&l, &[("m1", 0.0, 120.0), ("m2", 136.0, 60.0)]);
        assert!(l.spacers.is_empty());
        assert_eq!(l.total_height, Lu(196.0));
    }

    #[test]
    fn crossing_relations_keep_left_order() {
        let l = build(
            &[("m1", 100.0), ("m2", 100.0), ("c1", 60.0), ("c2", 60.0)],
            &[("m1", "c2"), ("m2", "c1")],
            &LayoutConfig::default(),
        );
        // m1 is aligned first; m2 can only follow it
        expect(&l, &[("m1", 76.0, 60.0), ("m2", 152.0, 60.0), ("c1", 0.0, 60.0), ("c2", 76.0, 60.0)]);
        assert!(l.spacers.is_empty());
        let l = build(
            &[("m1", 100.0), ("m2", 100.0), ("m3", 40.0), ("c1", 60.0), ("c2", 60.0)],
            &[("m3", "c2"), ("m2", "c1")],
            &LayoutConfig::default(),
        );
        // c1 is held for m2, so the spacer opens above it
        expect(
            &l,
            &[("m1", 0.0, 100.0), ("m2", 116.0, 60.0), ("m3", 192.0, 40.0), ("c1", 116.0, 60.0), ("c2", 192.0, 60.0)],
        );
        assert_eq!(l.spacers.len(), 1);
        assert_eq!((l.spacers[0].before.as_str(), l.spacers[0].height), ("c1", Lu(116.0)));
    }

    #[test]
    fn empty_notebook() {
        let l = build(&[], &[], &LayoutConfig::default());
        assert!(l.placed_cells.is_empty());
        assert_eq!(l.total_height, Lu::ZERO);
    }

    #[test]
    fn rejects_pairs_without_text() {
        let nb = NotebookDoc::from_cells(
            ["c1", "o1"]
                .iter()
                .map(|s| Cell {
                    id: id(s),
                    kind: id(s).kind(),
                    source: String::new(),
                    output_payloads: vec![],
                    ordinal: 0,
                })
                .collect(),
            "t",
        )
        .unwrap();
        let heights = [(id("c1"), Lu(40.0)), (id("o1"), Lu(40.0))].into_iter().collect();
        let pair = AggregatedRelationship::new(id("c1"), id("o1")).unwrap();
        assert_eq!(
            compute_layout(&nb, &heights, std::slice::from_ref(&pair), &LayoutConfig::default()),
            Err(LayoutError::UnsupportedPair(pair))
        );
        assert_eq!(
            compute_layout(&nb, &HashMap::new(), &[], &LayoutConfig::default()),
            Err(LayoutError::MissingHeight(id("c1")))
        );
    }
}
