//! Synthetic notebooks and relationship sets for tests and benchmarks.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::notebook::{Cell, CellId, CellKind, NotebookDoc, OutputPayload};
use crate::relationship::{BBox, ContentAnchor, Relationship, RelationshipSet, Sketch, ViewSize};

/// Cell and relationship counts of a notebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub text: usize,
    pub code: usize,
    pub output: usize,
    pub relationships: usize,
}

/// House price notebook: 55 text, 32 code, 24 output cells, 56 relationships.
pub const HOUSE: Census = Census { text: 55, code: 32, output: 24, relationships: 56 };
/// Titanic notebook: 49 text, 52 code, 49 output cells, 100 relationships.
pub const TITANIC: Census = Census { text: 49, code: 52, output: 49, relationships: 100 };

const WORDS: &[&str] = &[
    "the",
    "model",
    "price",
    "we",
    "plot",
    "distribution",
    "of",
    "feature",
    "data",
    "missing",
    "values",
    "train",
    "survived",
    "passengers",
    "correlation",
    "between",
    "and",
    "a",
    "column",
    "mean",
    "fill",
    "category",
    "age",
    "fare",
    "class",
    "score",
    "validation",
    "split",
    "outliers",
    "log",
    "transform",
    "skewed",
    "target",
];
const IDENTS: &[&str] =
    &["df", "train", "test", "x", "y", "model", "pred", "np", "pd", "plt", "sns", "cols", "fit", "score", "mean", "i"];

fn prose(rng: &mut impl Rng) -> String {
    let lines = rng.random_range(1..=24);
    (0..lines)
        .map(|_| {
            let n = rng.random_range(2..=18);
            (0..n).map(|_| *WORDS.choose(rng).expect("non-empty")).collect::<Vec<_>>().join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn code(rng: &mut impl Rng) -> String {
    let lines = rng.random_range(1..=20);
    (0..lines)
        .map(|_| {
            let a = IDENTS.choose(rng).expect("non-empty");
            let b = IDENTS.choose(rng).expect("non-empty");
            let c = IDENTS.choose(rng).expect("non-empty");
            format!("{a} = {b}.{c}({})", rng.random_range(0..100))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn output(rng: &mut impl Rng) -> (String, Vec<OutputPayload>) {
    if rng.random_bool(0.5) {
        let w = rng.random_range(200..=1200);
        let h = rng.random_range(100..=900);
        (String::new(), vec![OutputPayload::image("image/png", w, h)])
    } else {
        let lines = rng.random_range(1..=15);
        let text = (0..lines).map(|i| format!("{i}  {:.4}", rng.random::<f64>())).collect::<Vec<_>>().join("\n");
        (text.clone(), vec![OutputPayload::text("text/plain", text)])
    }
}

/// Builds cells in the given kind order; each output follows its code cell.
fn notebook_from_plan(plan: &[(CellKind, bool)], rng: &mut impl Rng) -> NotebookDoc {
    let (mut n_text, mut n_code) = (0, 0);
    let mut cells = Vec::new();
    for &(kind, with_output) in plan {
        let cell = |id: CellId, kind, source, output_payloads| Cell { id, kind, source, output_payloads, ordinal: 0 };
        if kind == CellKind::Text {
            n_text += 1;
            cells.push(cell(CellId::new(CellKind::Text, n_text), CellKind::Text, prose(rng), Vec::new()));
        } else {
            n_code += 1;
            cells.push(cell(CellId::new(CellKind::Code, n_code), CellKind::Code, code(rng), Vec::new()));
            if with_output {
                let (source, payloads) = output(rng);
                cells.push(cell(CellId::new(CellKind::Output, n_code), CellKind::Output, source, payloads));
            }
        }
    }
    NotebookDoc::from_cells(cells, "synthetic.ipynb").expect("generated ids are unique")
}

fn anchor_on(cell: &Cell, rng: &mut impl Rng) -> ContentAnchor {
    let len = cell.char_len();
    if rng.random_bool(0.5) || (cell.kind != CellKind::Output && len == 0) {
        return ContentAnchor::cell(cell.id.clone(), cell.kind);
    }
    if cell.kind == CellKind::Output {
        let view = ViewSize { width: 800.0, height: 600.0 };
        let x = f64::from(rng.random_range(0..700u32));
        let y = f64::from(rng.random_range(0..500u32));
        let bbox = BBox { x, y, width: 100.0, height: 100.0, angle_degrees: 0.0 };
        return ContentAnchor::sketch(cell.id.clone(), Sketch::Bbox(bbox), view);
    }
    let start = rng.random_range(0..len);
    let length = rng.random_range(1..=(len - start).min(80));
    ContentAnchor::span(cell.id.clone(), cell.kind, start, length)
}

/// In-scope relationships between random text and right cells.
///
/// With `distinct_pairs` every relationship joins a different cell pair,
/// as far as the notebook allows.
fn relationships(nb: &NotebookDoc, count: usize, distinct_pairs: bool, rng: &mut impl Rng) -> RelationshipSet {
    let texts: Vec<&Cell> = nb.cells().iter().filter(|c| c.kind == CellKind::Text).collect();
    let rights: Vec<&Cell> = nb.cells().iter().filter(|c| c.kind != CellKind::Text).collect();
    if texts.is_empty() || rights.is_empty() {
        return RelationshipSet::default();
    }
    let mut pairs: Vec<(usize, usize)> = if distinct_pairs {
        let mut all: Vec<_> = (0..texts.len()).flat_map(|t| (0..rights.len()).map(move |r| (t, r))).collect();
        all.shuffle(rng);
        all.truncate(count);
        all
    } else {
        (0..count).map(|_| (rng.random_range(0..texts.len()), rng.random_range(0..rights.len()))).collect()
    };
    // keep relations local, as in real notebooks: sort by text position
    pairs.sort_unstable();
    let rels = pairs
        .into_iter()
        .map(|(t, r)| {
            let text = anchor_on(texts[t], rng);
            let right = anchor_on(rights[r], rng);
            if rng.random_bool(0.5) {
                Relationship::new(text, right)
            } else {
                Relationship::new(right, text)
            }
        })
        .collect();
    RelationshipSet::new(rels)
}

/// A notebook with exactly the cell counts of `census` and
/// `census.relationships` in-scope relationships over distinct cell pairs.
///
/// # Panics
/// If `census.output > census.code`.
#[must_use]
pub fn census_notebook(census: Census, seed: u64) -> (NotebookDoc, RelationshipSet) {
    assert!(census.output <= census.code, "every output needs a code cell");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut with_output: Vec<bool> = (0..census.code).map(|i| i < census.output).collect();
    with_output.shuffle(&mut rng);
    let mut plan: Vec<(CellKind, bool)> = with_output.into_iter().map(|o| (CellKind::Code, o)).collect();
    plan.extend(std::iter::repeat_n((CellKind::Text, false), census.text));
    plan.shuffle(&mut rng);
    let nb = notebook_from_plan(&plan, &mut rng);
    let rels = relationships(&nb, census.relationships, true, &mut rng);
    (nb, rels)
}

/// A random notebook of at most `max_cells` cells with at most `max_rels`
/// in-scope relationships.
#[must_use]
pub fn random_notebook(seed: u64, max_cells: usize, max_rels: usize) -> (NotebookDoc, RelationshipSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(0..=max_cells);
    let text_share = rng.random_range(0.2..0.8);
    let mut plan = Vec::new();
    let mut cells = 0;
    while cells < target {
        if rng.random_bool(text_share) {
            plan.push((CellKind::Text, false));
            cells += 1;
        } else {
            let out = cells + 1 < target && rng.random_bool(0.6);
            plan.push((CellKind::Code, out));
            cells += 1 + usize::from(out);
        }
    }
    let nb = notebook_from_plan(&plan, &mut rng);
    let count = rng.random_range(0..=max_rels);
    let rels = relationships(&nb, count, false, &mut rng);
    (nb, rels)
}
