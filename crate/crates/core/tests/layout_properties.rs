mod common;

use common::{check_layout, oracle, Case, Placement};
use interlink_core::{route_links, AggregatedRelationship, CellKind};
use proptest::prelude::*;

fn case(max_cells: usize) -> impl Strategy<Value = Case> {
    prop::collection::vec((0..3u8, 1..=20u32), 1..=max_cells)
        .prop_flat_map(|cells| {
            let n = cells.len();
            (Just(cells), prop::collection::vec(prop::bool::weighted(0.3), n * n))
        })
        .prop_map(|(cells, mask)| {
            let n = cells.len();
            let kinds: Vec<CellKind> = cells
                .iter()
                .map(|(k, _)| match k {
                    0 => CellKind::Text,
                    1 => CellKind::Code,
                    _ => CellKind::Output,
                })
                .collect();
            let content = cells.iter().map(|(_, h)| f64::from(h * 10)).collect();
            let mut pairs = Vec::new();
            for t in 0..n {
                for r in 0..n {
                    if kinds[t] == CellKind::Text && kinds[r] != CellKind::Text && mask[t * n + r] {
                        pairs.push((t, r));
                    }
                }
            }
            Case::new(kinds, content, pairs, 10.0, 60.0)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn sweep_matches_exhaustive_search(c in case(6)) {
        let sweep = Placement::of(&c.run());
        let best = oracle(&c).expect("the sweep's own placement is feasible");
        prop_assert_eq!(sweep, best, "{:?}", c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sweep_obeys_the_placement_rules(c in case(40)) {
        let layout = c.run();
        if let Err(e) = check_layout(&c, &layout) {
            prop_assert!(false, "{e}\n{c:?}\n{layout:?}");
        }
    }

    #[test]
    fn pair_order_does_not_matter(c in case(24), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut shuffled = c.clone();
        shuffled.pairs.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(c.run(), shuffled.run());
    }

    #[test]
    fn links_join_cell_midpoints(c in case(24)) {
        let layout = c.run();
        let ids = c.ids();
        let pairs: Vec<AggregatedRelationship> = c
            .pairs
            .iter()
            .filter_map(|&(t, r)| AggregatedRelationship::new(ids[t].clone(), ids[r].clone()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let cfg = c.config();
        let links = route_links(&layout.placed_cells, &pairs, &cfg).unwrap();
        prop_assert_eq!(links.len(), pairs.len());
        for w in links.windows(2) {
            prop_assert!(w[0].from_point[1] <= w[1].from_point[1]);
        }
        for l in &links {
            let text = layout.placed_cells.iter().find(|p| p.cell_id == l.text_cell).unwrap();
            let right = layout.placed_cells.iter().find(|p| p.cell_id == l.right_cell).unwrap();
            prop_assert_eq!(l.from_point[0], cfg.left_column_width);
            prop_assert_eq!(l.to_point[0], cfg.left_column_width + cfg.column_gap);
            prop_assert!(text.y <= l.from_point[1] && l.from_point[1] <= text.bottom());
            prop_assert!(right.y <= l.to_point[1] && l.to_point[1] <= right.bottom());
            prop_assert_eq!(l.curve[0][0], cfg.left_column_width + cfg.column_gap / 2.0);
            prop_assert_eq!(l.curve[1][0], cfg.left_column_width + cfg.column_gap / 2.0);
        }
    }
}

#[test]
fn held_anchor_takes_the_spacer() {
    use CellKind::{Code, Text};
    let c = Case::new(
        vec![Text, Text, Text, Code, Code],
        vec![200.0, 100.0, 100.0, 50.0, 50.0],
        vec![(1, 4), (2, 3)],
        10.0,
        60.0,
    );
    let best = oracle(&c).unwrap();
    assert_eq!(best.y, [0.0, 70.0, 130.0, 10.0, 70.0]);
    assert_eq!(Placement::of(&c.run()), best);
}
