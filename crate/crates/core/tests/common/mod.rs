//! Declarative layout rules, an invariant checker built on them, and an
//! exhaustive placement oracle for very small notebooks.
#![allow(dead_code)]

use std::cell::OnceCell;
use std::collections::HashMap;

use interlink_core::notebook::Cell;
use interlink_core::{compute_layout, AggregatedRelationship, CellId, CellKind, Layout, LayoutConfig, Lu, NotebookDoc};

const EPS: f64 = 1e-6;

/// A layout problem stated with plain numbers.
#[derive(Debug, Clone)]
pub struct Case {
    pub ids: Vec<CellId>,
    pub kinds: Vec<CellKind>,
    pub content: Vec<f64>,
    /// (text cell index, right cell index) into `kinds`.
    pub pairs: Vec<(usize, usize)>,
    pub gap: f64,
    pub default_height: f64,
    derived: OnceCell<Derived>,
}

/// Per-cell facts computed once per case.
#[derive(Debug, Clone)]
struct Derived {
    anchor: Vec<Option<usize>>,
    cap: Vec<f64>,
    /// Texts whose anchor is this cell.
    anchored_by: Vec<Vec<usize>>,
}

impl Case {
    pub fn new(
        kinds: Vec<CellKind>,
        content: Vec<f64>,
        pairs: Vec<(usize, usize)>,
        gap: f64,
        default_height: f64,
    ) -> Self {
        let (mut t, mut c) = (0, 0);
        let ids = kinds
            .iter()
            .map(|k| match k {
                CellKind::Text => {
                    t += 1;
                    CellId::new(CellKind::Text, t)
                }
                // the oracle does not care about output/code pairing; give each right cell its own number
                k => {
                    c += 1;
                    CellId::new(*k, c)
                }
            })
            .collect();
        Self { ids, kinds, content, pairs, gap, default_height, derived: OnceCell::new() }
    }

    /// The problem a full pipeline run solved: measured heights and the
    /// aggregated pairs it laid out.
    pub fn from_notebook(
        nb: &NotebookDoc,
        heights: &HashMap<CellId, Lu>,
        pairs: &[AggregatedRelationship],
        cfg: &LayoutConfig,
    ) -> Self {
        let ids: Vec<CellId> = nb.cells().iter().map(|c| c.id.clone()).collect();
        let pairs = pairs
            .iter()
            .map(|p| {
                let (a, b) = (nb.ordinal(p.first()).unwrap(), nb.ordinal(p.second()).unwrap());
                if ids[a].kind() == CellKind::Text {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Self {
            kinds: ids.iter().map(CellId::kind).collect(),
            content: ids.iter().map(|id| heights[id].get()).collect(),
            ids,
            pairs,
            gap: cfg.cell_gap.get(),
            default_height: cfg.default_text_height.get(),
            derived: OnceCell::new(),
        }
    }

    pub fn ids(&self) -> Vec<CellId> {
        self.ids.clone()
    }

    pub fn config(&self) -> LayoutConfig {
        LayoutConfig {
            cell_gap: Lu(self.gap),
            default_text_height: Lu(self.default_height),
            min_cell_height: Lu(1.0),
            ..LayoutConfig::default()
        }
    }

    pub fn run(&self) -> Layout {
        let ids = self.ids();
        let cells = ids
            .iter()
            .map(|id| Cell {
                id: id.clone(),
                kind: id.kind(),
                source: String::new(),
                output_payloads: vec![],
                ordinal: 0,
            })
            .collect();
        let nb = NotebookDoc::from_cells(cells, "case").unwrap();
        let heights: HashMap<CellId, Lu> = ids.iter().cloned().zip(self.content.iter().map(|&h| Lu(h))).collect();
        let pairs: Vec<AggregatedRelationship> = self
            .pairs
            .iter()
            .map(|&(t, r)| AggregatedRelationship::new(ids[t].clone(), ids[r].clone()).unwrap())
            .collect();
        compute_layout(&nb, &heights, &pairs, &self.config()).unwrap()
    }

    fn texts(&self) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&i| self.kinds[i] == CellKind::Text).collect()
    }

    fn rights(&self) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&i| self.kinds[i] != CellKind::Text).collect()
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let n = self.kinds.len();
            let rights = self.rights();
            let mut slot = vec![usize::MAX; n];
            for (k, &r) in rights.iter().enumerate() {
                slot[r] = k;
            }
            let mut related = vec![Vec::new(); n];
            for &(t, r) in &self.pairs {
                related[t].push(r);
            }
            let mut d = Derived { anchor: vec![None; n], cap: vec![0.0; n], anchored_by: vec![Vec::new(); n] };
            for (t, rel) in related.iter_mut().enumerate() {
                rel.sort_unstable();
                rel.dedup();
                d.anchor[t] = rel.first().copied();
                if let Some(&a) = rel.first() {
                    d.anchored_by[a].push(t);
                }
                // related heights plus one gap per adjacent pair in the right column
                let heights: f64 = rel.iter().map(|&r| self.content[r]).sum();
                let adjacent = rel.windows(2).filter(|w| slot[w[1]] == slot[w[0]] + 1).count();
                d.cap[t] = heights + adjacent as f64 * self.gap;
            }
            d
        })
    }

    fn anchor(&self, t: usize) -> Option<usize> {
        self.derived().anchor[t]
    }

    fn cap(&self, t: usize) -> f64 {
        self.derived().cap[t]
    }

    fn anchors_any(&self, r: usize) -> bool {
        !self.derived().anchored_by[r].is_empty()
    }

    fn anchors_text_after(&self, r: usize, u: usize) -> bool {
        self.derived().anchored_by[r].iter().any(|&t| t > u)
    }
}

/// Positions and heights by cell index.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub y: Vec<f64>,
    pub h: Vec<f64>,
}

impl Placement {
    pub fn of(layout: &Layout) -> Self {
        Self {
            y: layout.placed_cells.iter().map(|c| c.y.get()).collect(),
            h: layout.placed_cells.iter().map(|c| c.height.get()).collect(),
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

/// Lower bound for cell `i` given the previous cell of its column.
fn floor(case: &Case, p: &Placement, column: &[usize], k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        let prev = column[k - 1];
        p.y[prev] + p.h[prev] + case.gap
    }
}

/// The placement rules every valid layout obeys.
///
/// H1 order and spacing per column, H2 exact right heights, H3 related
/// text height, H4 cells that anchor nothing sit tight, H5 unrelated text
/// fills the slot beside the next bare right cell when it can.
pub fn rules(case: &Case, p: &Placement) -> Result<(), String> {
    let texts = case.texts();
    let rights = case.rights();
    for column in [&texts, &rights] {
        for (k, &i) in column.iter().enumerate() {
            if p.y[i] < floor(case, p, column, k) - EPS {
                return Err(format!("H1: cell {i} at {} overlaps its predecessor", p.y[i]));
            }
        }
    }
    for &r in &rights {
        if !close(p.h[r], case.content[r]) {
            return Err(format!("H2: right cell {r} height {} != {}", p.h[r], case.content[r]));
        }
    }
    for (k, &r) in rights.iter().enumerate() {
        if !case.anchors_any(r) && !close(p.y[r], floor(case, p, &rights, k)) {
            return Err(format!("H4: bare right cell {r} at {} is not tight", p.y[r]));
        }
    }
    for (k, &t) in texts.iter().enumerate() {
        if case.anchor(t).is_some() {
            let want = case.content[t].min(case.cap(t));
            if !close(p.h[t], want) {
                return Err(format!("H3: text {t} height {} != {want}", p.h[t]));
            }
            continue;
        }
        let c = rights.iter().position(|&r| r > t);
        let aligned = c.is_some_and(|ci| {
            let cell = rights[ci];
            !case.anchors_any(cell)
                && !rights[..ci].iter().any(|&r| case.anchors_text_after(r, t))
                && p.y[cell] >= floor(case, p, &texts, k) - EPS
        });
        if aligned {
            let cell = rights[c.unwrap()];
            let want = case.content[t].min(case.content[cell]);
            if !close(p.y[t], p.y[cell]) || !close(p.h[t], want) {
                return Err(format!("H5: unrelated text {t} should sit beside {cell} with height {want}"));
            }
        } else if !close(p.h[t], case.content[t].min(case.default_height)) {
            return Err(format!("H5: unrelated text {t} height {} is not the fallback", p.h[t]));
        }
    }
    Ok(())
}

/// Rules plus the consequences the sweep guarantees: related texts sit at
/// max(previous bottom + gap, anchor top), unrelated fallbacks sit tight,
/// spacers account for every gap in the right column, flags and totals
/// are consistent.
pub fn check_layout(case: &Case, layout: &Layout) -> Result<(), String> {
    let p = Placement::of(layout);
    rules(case, &p)?;
    let texts = case.texts();
    let rights = case.rights();
    for (k, &t) in texts.iter().enumerate() {
        let lower = floor(case, &p, &texts, k);
        match case.anchor(t) {
            Some(a) => {
                let want = lower.max(p.y[a]);
                if !close(p.y[t], want) {
                    return Err(format!("O2: text {t} at {} instead of {want}", p.y[t]));
                }
            }
            None => {
                let beside = rights.iter().any(|&r| close(p.y[r], p.y[t]) && !case.anchors_any(r) && r > t);
                if !beside && !close(p.y[t], lower) {
                    return Err(format!("O3: unrelated text {t} at {} instead of {lower}", p.y[t]));
                }
            }
        }
    }
    let ids = case.ids();
    let mut spacers: HashMap<&CellId, f64> = HashMap::new();
    for s in &layout.spacers {
        if s.height.get() <= 0.0 || s.column != interlink_core::Column::Right {
            return Err(format!("bad spacer {s:?}"));
        }
        if spacers.insert(&s.before, s.height.get()).is_some() {
            return Err(format!("two spacers above {}", s.before));
        }
    }
    for (k, &r) in rights.iter().enumerate() {
        let slack = p.y[r] - floor(case, &p, &rights, k);
        let spacer = spacers.remove(&ids[r]).unwrap_or(0.0);
        if !close(slack, spacer) {
            return Err(format!("right cell {r} has slack {slack} but spacer {spacer}"));
        }
        if spacer > 0.0 && !case.anchors_any(r) {
            return Err(format!("spacer above bare cell {r}"));
        }
    }
    for (i, c) in layout.placed_cells.iter().enumerate() {
        if c.scrollable != (case.content[i] > c.height.get() + EPS) {
            return Err(format!("scroll flag of cell {i}"));
        }
        if c.height.get() > case.content[i] + EPS {
            return Err(format!("cell {i} taller than its content"));
        }
    }
    let total = (0..p.y.len()).map(|i| p.y[i] + p.h[i]).fold(0.0, f64::max);
    if !close(total, layout.total_height.get()) {
        return Err(format!("total height {} != {total}", layout.total_height.get()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TextChoice {
    Tight,
    /// Top equal to a right cell's top; `aligned` selects the beside-cell height.
    At {
        right: usize,
        aligned: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RightChoice {
    Tight,
    /// This cell and the ones after it up to `last` sit tight, with `last`
    /// level with text `text`.
    Chain {
        text: usize,
        last: usize,
    },
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Fresh,
    Busy,
    Done(f64),
}

struct Resolver<'a> {
    case: &'a Case,
    texts: &'a [usize],
    rights: &'a [usize],
    tc: &'a [TextChoice],
    rc: &'a [RightChoice],
    h: Vec<f64>,
    marks: Vec<Mark>,
}

impl Resolver<'_> {
    /// Top of cell `i`, or `None` on a cyclic choice.
    fn top(&mut self, i: usize) -> Option<f64> {
        match self.marks[i] {
            Mark::Done(y) => return Some(y),
            Mark::Busy => return None,
            Mark::Fresh => {}
        }
        self.marks[i] = Mark::Busy;
        let y = if self.case.kinds[i] == CellKind::Text {
            let k = self.texts.iter().position(|&t| t == i).unwrap();
            match self.tc[k] {
                TextChoice::Tight if k == 0 => 0.0,
                TextChoice::Tight => {
                    let prev = self.texts[k - 1];
                    self.top(prev)? + self.h[prev] + self.case.gap
                }
                TextChoice::At { right, .. } => self.top(right)?,
            }
        } else {
            let k = self.rights.iter().position(|&r| r == i).unwrap();
            match self.rc[k] {
                RightChoice::Tight if k == 0 => 0.0,
                RightChoice::Tight => {
                    let prev = self.rights[k - 1];
                    self.top(prev)? + self.h[prev] + self.case.gap
                }
                RightChoice::Chain { text, last } => {
                    let run: f64 = self.rights[k..last].iter().map(|&r| self.h[r] + self.case.gap).sum();
                    self.top(text)? - run
                }
            }
        };
        self.marks[i] = Mark::Done(y);
        Some(y)
    }
}

fn odometer(sizes: &[usize], mut visit: impl FnMut(&[usize])) {
    let mut idx = vec![0; sizes.len()];
    if sizes.contains(&0) {
        return;
    }
    loop {
        visit(&idx);
        let mut k = 0;
        loop {
            if k == sizes.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Exhaustive search over alignment choices.
///
/// Every text either follows its predecessor or is level with some right
/// cell; every right cell that anchors a text either follows its
/// predecessor or starts a tight run ending level with some text. Among
/// placements obeying [`rules`], returns the one minimising, text by text in
/// notebook order, the distance to the anchor and then the top; ties go to
/// the lowest right-column tops.
pub fn oracle(case: &Case) -> Option<Placement> {
    let texts = case.texts();
    let rights = case.rights();
    let n = case.kinds.len();

    let text_options: Vec<Vec<TextChoice>> = texts
        .iter()
        .map(|&t| {
            let mut v = vec![TextChoice::Tight];
            for &r in &rights {
                v.push(TextChoice::At { right: r, aligned: false });
                if case.anchor(t).is_none() {
                    v.push(TextChoice::At { right: r, aligned: true });
                }
            }
            v
        })
        .collect();
    let right_options: Vec<Vec<RightChoice>> = rights
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let mut v = vec![RightChoice::Tight];
            if case.anchors_any(r) {
                for &t in &texts {
                    for last in k..rights.len() {
                        v.push(RightChoice::Chain { text: t, last });
                    }
                }
            }
            v
        })
        .collect();

    let sizes: Vec<usize> = text_options.iter().map(Vec::len).chain(right_options.iter().map(Vec::len)).collect();
    let mut best: Option<(Vec<f64>, Placement)> = None;
    odometer(&sizes, |idx| {
        let tc: Vec<TextChoice> = (0..texts.len()).map(|k| text_options[k][idx[k]]).collect();
        let rc: Vec<RightChoice> = (0..rights.len()).map(|k| right_options[k][idx[texts.len() + k]]).collect();
        // a run must really be tight after its first cell
        for (k, c) in rc.iter().enumerate() {
            if let RightChoice::Chain { last, .. } = *c {
                if rc[k + 1..=last].iter().any(|c| *c != RightChoice::Tight) {
                    return;
                }
            }
        }
        let mut h = case.content.clone();
        for (k, &t) in texts.iter().enumerate() {
            h[t] = if case.anchor(t).is_some() {
                case.content[t].min(case.cap(t))
            } else {
                match tc[k] {
                    TextChoice::At { right, aligned: true } => case.content[t].min(case.content[right]),
                    _ => case.content[t].min(case.default_height),
                }
            };
        }
        let mut res =
            Resolver { case, texts: &texts, rights: &rights, tc: &tc, rc: &rc, h, marks: vec![Mark::Fresh; n] };
        let mut y = vec![0.0; n];
        for (i, slot) in y.iter_mut().enumerate() {
            match res.top(i) {
                Some(v) => *slot = v,
                None => return,
            }
        }
        // the beside-cell height only applies next to the first right cell after the text
        for (k, &t) in texts.iter().enumerate() {
            if let TextChoice::At { right, aligned: true } = tc[k] {
                if rights.iter().find(|&&r| r > t) != Some(&right) {
                    return;
                }
            }
        }
        let p = Placement { y, h: res.h };
        if rules(case, &p).is_err() {
            return;
        }
        let mut key = Vec::with_capacity(2 * texts.len() + rights.len());
        for &t in &texts {
            let d = case.anchor(t).map_or(0.0, |a| (p.y[t] - p.y[a]).abs());
            key.push(d);
            key.push(p.y[t]);
        }
        key.extend(rights.iter().map(|&r| p.y[r]));
        let better = best
            .as_ref()
            .is_none_or(|(k, _)| key.iter().zip(k).find(|(a, b)| !close(**a, **b)).is_some_and(|(a, b)| a < b));
        if better {
            best = Some((key, p));
        }
    });
    best.map(|(_, p)| p)
}

/// A random layout problem on a coarse grid.
pub fn random_case(rng: &mut impl rand::Rng, max_cells: usize) -> Case {
    let n = rng.random_range(1..=max_cells);
    let kinds: Vec<CellKind> = (0..n)
        .map(|_| match rng.random_range(0..3) {
            0 => CellKind::Text,
            1 => CellKind::Code,
            _ => CellKind::Output,
        })
        .collect();
    let content = (0..n).map(|_| f64::from(rng.random_range(1..=20u32) * 10)).collect();
    let mut pairs = Vec::new();
    for t in (0..n).filter(|&i| kinds[i] == CellKind::Text) {
        for r in (0..n).filter(|&i| kinds[i] != CellKind::Text) {
            if rng.random_bool(0.3) {
                pairs.push((t, r));
            }
        }
    }
    Case::new(kinds, content, pairs, 10.0, 60.0)
}
