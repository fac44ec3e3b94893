//! The matcher must agree exactly with a brute-force enumerator on small
//! random graphs and random chain patterns.

use std::collections::BTreeSet;

use epgm_model::{props, EpgmDatabase, LogicalGraph};
use epgm_pattern::matcher::{brute_force_match, label_predicate};
use epgm_pattern::{match_pattern, parse_pattern};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Scenario {
    vertex_labels: Vec<u8>,
    edges: Vec<(usize, usize, u8)>,
    /// Chain of (vertex var index 0..4, direction) pairs building a pattern
    /// string with up to 3 edges.
    chain: Vec<(u8, bool)>,
    constrain_first_vertex: bool,
    constrain_first_edge: bool,
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (1usize..=8).prop_flat_map(|n| {
        (
            proptest::collection::vec(0u8..2, n),
            proptest::collection::vec((0..n, 0..n, 0u8..2), 0..=14),
            proptest::collection::vec((0u8..4, any::<bool>()), 1..=4),
            any::<bool>(),
            any::<bool>(),
        )
            .prop_map(
                |(vertex_labels, edges, chain, constrain_first_vertex, constrain_first_edge)| {
                    Scenario {
                        vertex_labels,
                        edges,
                        chain,
                        constrain_first_vertex,
                        constrain_first_edge,
                    }
                },
            )
    })
}

fn build_graph(s: &Scenario) -> LogicalGraph {
    let mut db = EpgmDatabase::new();
    for label in &s.vertex_labels {
        let label = if *label == 0 { "P" } else { "Q" };
        db.add_vertex(label, props! {});
    }
    for (src, tgt, label) in &s.edges {
        let label = if *label == 0 { "x" } else { "y" };
        db.add_edge(*src as u64, *tgt as u64, label, props! {})
            .unwrap();
    }
    db.database_graph()
}

/// Build a chain pattern string like `(v0)-e0->(v2)<-e1-(v1)` from the
/// scenario; vertex variables may repeat, edge variables never do.
fn build_pattern_text(s: &Scenario) -> String {
    let vars = ["a", "b", "c", "d"];
    let mut text = format!("({})", vars[s.chain[0].0 as usize]);
    for (i, (var, right)) in s.chain.iter().enumerate().skip(1) {
        let edge_var = format!("e{i}");
        if *right {
            text.push_str(&format!("-{edge_var}->({})", vars[*var as usize]));
        } else {
            text.push_str(&format!("<-{edge_var}-({})", vars[*var as usize]));
        }
    }
    text
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn matcher_equals_brute_force(s in scenario()) {
        let graph = build_graph(&s);
        let pattern = parse_pattern(&build_pattern_text(&s)).unwrap();

        let vertex_constraints: Vec<(&str, &str)> = if s.constrain_first_vertex {
            vec![("a", "P")]
        } else {
            vec![]
        };
        let edge_constraints: Vec<(&str, &str)> =
            if s.constrain_first_edge && !pattern.edges.is_empty() {
                vec![("e1", "x")]
            } else {
                vec![]
            };

        // Skip scenarios where the constrained variables are absent.
        if s.constrain_first_vertex && !pattern.vertex_vars.iter().any(|v| v == "a") {
            return Ok(());
        }

        let fast = match_pattern(
            &graph,
            &pattern,
            label_predicate(&vertex_constraints, &edge_constraints),
        )
        .unwrap();
        let fast_sets: BTreeSet<(Vec<u64>, Vec<u64>)> = fast
            .iter()
            .map(|g| {
                (
                    g.vertex_ids().collect::<Vec<u64>>(),
                    g.edge_ids().collect::<Vec<u64>>(),
                )
            })
            .collect();

        let slow_sets = brute_force_match(
            &graph,
            &pattern,
            label_predicate(&vertex_constraints, &edge_constraints),
        )
        .unwrap();

        prop_assert_eq!(&fast_sets, &slow_sets);

        // Output is duplicate-free and deterministically ordered.
        prop_assert_eq!(fast.len(), fast_sets.len());
        let ordered: Vec<(Vec<u64>, Vec<u64>)> = fast
            .iter()
            .map(|g| {
                (
                    g.vertex_ids().collect::<Vec<u64>>(),
                    g.edge_ids().collect::<Vec<u64>>(),
                )
            })
            .collect();
        let mut sorted = ordered.clone();
        sorted.sort();
        prop_assert_eq!(ordered, sorted);
    }
}
