//! Property-based tests for graph construction, the edge-list loader's
//! cleanup guarantees, and strategy-spec parsing.

use std::io::Cursor;

use covertime::generate::{
    barabasi_albert, complete, hypercube, lollipop, mesh3d, path, star, GraphKind,
};
use covertime::graph::load_edge_list;
use covertime::{Error, Graph, StrategySpec};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// A generated graph together with its expected node and edge counts.
fn generated_graph() -> impl Strategy<Value = (Graph, usize, usize)> {
    prop_oneof![
        (2u32..9).prop_map(|n| {
            let g = complete(n).unwrap();
            (g, n as usize, (n as usize * (n as usize - 1)) / 2)
        }),
        (3u32..12).prop_map(|n| (star(n).unwrap(), n as usize, n as usize - 1)),
        (2u32..16).prop_map(|n| (path(n).unwrap(), n as usize, n as usize - 1)),
        (1u32..5).prop_map(|d| {
            let g = hypercube(d).unwrap();
            (g, 1 << d, (d as usize) << (d - 1))
        }),
        ((3u32..7), (1u32..6)).prop_map(|(k, len)| {
            let g = lollipop(k, len).unwrap();
            let (k, len) = (k as usize, len as usize);
            (g, k + len, k * (k - 1) / 2 + len)
        }),
        ((2u32..4), (1u32..4), (1u32..4)).prop_map(|(a, b, c)| {
            let g = mesh3d(a, b, c).unwrap();
            let (a, b, c) = (a as usize, b as usize, c as usize);
            let m = (a - 1) * b * c + a * (b - 1) * c + a * b * (c - 1);
            (g, a * b * c, m)
        }),
        ((4u32..40), (1u32..4), any::<u64>()).prop_map(|(n, k, seed)| {
            let k = k.min(n - 1);
            let g = barabasi_albert(n, k, seed).unwrap();
            let n = n as usize;
            let m = g.m();
            (g, n, m)
        }),
    ]
}

/// A messy edge-list input: arbitrary ids, self-loops, duplicates, comments.
fn messy_edge_lines() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0u64..25, 0u64..25), 1..60)
}

fn render_edge_list(pairs: &[(u64, u64)]) -> String {
    let mut text = String::from("# comment line\n\n");
    for &(u, v) in pairs {
        text.push_str(&format!("{u} {v}\n"));
    }
    text
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generators_produce_validated_graphs_of_the_right_size(
        (g, n, m) in generated_graph()
    ) {
        prop_assert_eq!(g.n(), n);
        prop_assert_eq!(g.m(), m);
        prop_assert!(g.validate().is_ok());
        let degree_sum: usize = (0..n as u32).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * m);
    }

    #[test]
    fn save_and_load_roundtrips_exactly((g, _, _) in generated_graph()) {
        let mut buf = Vec::new();
        g.save_edge_list(&mut buf).unwrap();
        let (back, report) = load_edge_list(Cursor::new(buf)).unwrap();
        prop_assert!(report.clean());
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.m(), g.m());
        for v in 0..g.n() as u32 {
            prop_assert_eq!(back.neighbors(v), g.neighbors(v));
        }
    }

    #[test]
    fn loader_cleanup_is_fully_accounted(pairs in messy_edge_lines()) {
        let text = render_edge_list(&pairs);
        let loops = pairs.iter().filter(|(u, v)| u == v).count();
        let mut unique: Vec<(u64, u64)> = pairs
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        unique.sort_unstable();
        unique.dedup();
        let mut endpoints: Vec<u64> =
            unique.iter().flat_map(|&(u, v)| [u, v]).collect();
        endpoints.sort_unstable();
        endpoints.dedup();

        match load_edge_list(Cursor::new(text)) {
            Ok((g, report)) => {
                prop_assert!(g.validate().is_ok());
                prop_assert_eq!(report.self_loops, loops);
                prop_assert_eq!(
                    report.duplicate_edges,
                    pairs.len() - loops - unique.len()
                );
                prop_assert_eq!(g.n() + report.dropped_nodes, endpoints.len());
                prop_assert_eq!(g.m() + report.dropped_edges, unique.len());
            }
            Err(Error::EmptyGraph) => {
                // every line was a self-loop
                prop_assert!(unique.is_empty());
            }
            Err(other) => return Err(TestCaseError::fail(other.to_string())),
        }
    }

    #[test]
    fn loader_remaps_ids_in_ascending_order(mut ids in prop::collection::vec(0u64..10_000, 2..12)) {
        ids.sort_unstable();
        ids.dedup();
        prop_assume!(ids.len() >= 2);
        // chain the ids into a path so the graph stays connected
        let text: String = ids
            .windows(2)
            .map(|w| format!("{} {}\n", w[0], w[1]))
            .collect();
        let (g, report) = load_edge_list(Cursor::new(text)).unwrap();
        prop_assert!(report.clean());
        for (dense, &original) in ids.iter().enumerate() {
            // already-dense inputs skip the id map entirely
            let mapped = g.original_id(dense as u32).unwrap_or(dense as u64);
            prop_assert_eq!(mapped, original);
        }
    }

    #[test]
    fn strategy_specs_roundtrip_through_display(
        spec in prop_oneof![
            Just(StrategySpec::Srw),
            Just(StrategySpec::Ep),
            Just(StrategySpec::Ad),
            Just(StrategySpec::Mdw),
            (1u32..1000).prop_map(|d| StrategySpec::rwc(d).unwrap()),
            (1u32..10_000).prop_map(|b| StrategySpec::md(b).unwrap()),
        ]
    ) {
        let text = spec.to_string();
        prop_assert_eq!(StrategySpec::parse(&text).unwrap(), spec);
    }

    #[test]
    fn strategy_parser_never_panics(text in "\\PC{0,20}") {
        let _ = StrategySpec::parse(&text);
    }

    #[test]
    fn graph_kind_specs_roundtrip_through_parse(
        kind in prop_oneof![
            (2u32..50).prop_map(|n| GraphKind::Complete { n }),
            (3u32..50).prop_map(|n| GraphKind::Star { n }),
            (2u32..50).prop_map(|n| GraphKind::Path { n }),
            (1u32..6).prop_map(|dim| GraphKind::Hypercube { dim }),
            ((3u32..8), (1u32..8))
                .prop_map(|(clique_n, path_len)| GraphKind::Lollipop { clique_n, path_len }),
        ]
    ) {
        let text = kind.to_string();
        let (g, _) = kind.build().unwrap();
        prop_assert_eq!(GraphKind::parse(&text).unwrap(), kind);
        prop_assert!(g.validate().is_ok());
    }
}
