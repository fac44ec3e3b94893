//! End-to-end evaluator tests: the shipped workflow scripts run against the
//! bundled example database and reproduce the documented results.

use std::collections::BTreeSet;
use std::rc::Rc;

use epgm_algorithms::AlgorithmRegistry;
use epgm_grala::{run_script, GralaError, RunOutcome, Value};
use epgm_model::fixtures::example_db;
use epgm_model::{props, EpgmDatabase, PropertyValue};

fn run(source: &str) -> RunOutcome {
    run_with(source, Rc::new(example_db()), vec![])
}

fn run_with(source: &str, db: Rc<EpgmDatabase>, extra: Vec<(String, Value)>) -> RunOutcome {
    run_script(source, db, Rc::new(AlgorithmRegistry::new()), extra).expect("script runs")
}

fn binding<'a>(outcome: &'a RunOutcome, name: &str) -> &'a Value {
    outcome
        .bindings
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .unwrap_or_else(|| panic!("binding {name} missing"))
}

fn collection_ids(value: &Value) -> Vec<u64> {
    match value {
        Value::Collection(c) => c.ids(),
        other => panic!("expected collection, got {other:?}"),
    }
}

#[test]
fn selection_script_results() {
    let outcome = run(include_str!("../../../scripts/select_communities.grala"));
    assert_eq!(collection_ids(binding(&outcome, "result1")), vec![2]);
    assert_eq!(collection_ids(binding(&outcome, "result2")), vec![1]);
}

#[test]
fn sort_and_top_script() {
    let outcome = run(include_str!("../../../scripts/sort_and_top.grala"));
    assert_eq!(
        collection_ids(binding(&outcome, "sortedColl")),
        vec![2, 0, 1]
    );
    assert_eq!(collection_ids(binding(&outcome, "topGraphs")), vec![2, 0]);
}

#[test]
fn collection_intersection() {
    let outcome = run("result = <db.G[0],db.G[1]>.intersect(<db.G[1],db.G[2]>)");
    assert_eq!(collection_ids(binding(&outcome, "result")), vec![1]);
}

#[test]
fn binary_operator_results() {
    let outcome = run(
        "c = db.G[0].combine(db.G[2])\no = db.G[0].overlap(db.G[2])\nx = db.G[0].exclude(db.G[2])",
    );
    let Value::Graph(c) = binding(&outcome, "c") else {
        panic!()
    };
    assert_eq!(c.vertex_id_set(), BTreeSet::from([0, 1, 2, 3, 4]));
    assert_eq!(c.edge_id_set(), BTreeSet::from([0, 1, 2, 3, 4, 5, 6, 21]));
    let Value::Graph(o) = binding(&outcome, "o") else {
        panic!()
    };
    assert_eq!(o.vertex_id_set(), BTreeSet::from([0, 1]));
    assert_eq!(o.edge_id_set(), BTreeSet::from([0, 1]));
    let Value::Graph(x) = binding(&outcome, "x") else {
        panic!()
    };
    assert_eq!(x.vertex_id_set(), BTreeSet::from([4]));
    assert!(x.edge_id_set().is_empty());
}

#[test]
fn match_script_finds_the_two_membership_subgraphs() {
    let outcome = run(include_str!("../../../scripts/match_forum_members.grala"));
    let Value::Collection(result) = binding(&outcome, "result") else {
        panic!()
    };
    assert_eq!(result.len(), 2);
    assert_eq!(
        result.get(0).unwrap().vertex_id_set(),
        BTreeSet::from([0, 1, 9])
    );
    assert_eq!(
        result.get(0).unwrap().edge_id_set(),
        BTreeSet::from([17, 18])
    );
    assert_eq!(
        result.get(1).unwrap().vertex_id_set(),
        BTreeSet::from([2, 3, 10])
    );
    assert_eq!(
        result.get(1).unwrap().edge_id_set(),
        BTreeSet::from([19, 20])
    );
}

#[test]
fn aggregate_script_sets_vertex_count() {
    let outcome = run(include_str!(
        "../../../scripts/aggregate_vertex_count.grala"
    ));
    let Value::Graph(result) = binding(&outcome, "result") else {
        panic!()
    };
    assert_eq!(
        result.properties().get("vertexCount"),
        Some(&PropertyValue::Int(3))
    );
}

#[test]
fn projection_script_rewrites_vertices() {
    let outcome = run(include_str!("../../../scripts/project_persons.grala"));
    let Value::Graph(projected) = binding(&outcome, "projGraph") else {
        panic!()
    };
    let alice = projected.vertex(0).unwrap();
    assert_eq!(alice.label, "Alice");
    assert_eq!(
        alice.properties.get("from"),
        Some(&PropertyValue::Str("Leipzig".into()))
    );
    assert_eq!(alice.properties.len(), 1);
    for e in projected.edges() {
        assert_eq!(e.label, "knows");
        assert!(e.properties.is_empty());
    }
    assert_eq!(projected.vertex_count(), 3);
    assert_eq!(projected.edge_count(), 4);
}

#[test]
fn summarize_script_groups_by_city() {
    let outcome = run(include_str!("../../../scripts/summarize_by_city.grala"));
    let Value::Graph(summary) = binding(&outcome, "sumGraph") else {
        panic!()
    };
    assert_eq!(summary.vertex_count(), 3);
    let by_city: std::collections::BTreeMap<String, f64> = summary
        .vertices()
        .map(|v| {
            (
                v.properties.get("city").unwrap().to_string(),
                v.properties.get("avg_age").unwrap().as_number().unwrap(),
            )
        })
        .collect();
    assert_eq!(by_city["Leipzig"], 25.0);
    assert_eq!(by_city["Dresden"], 36.0);
    assert_eq!(by_city["Berlin"], 35.0);
    let total: i64 = summary
        .edges()
        .map(|e| e.properties.get("count").unwrap().as_int().unwrap())
        .sum();
    assert_eq!(total, 10);
}

#[test]
fn apply_script_annotates_every_graph() {
    let outcome = run(include_str!("../../../scripts/apply_aggregate.grala"));
    let Value::Collection(annotated) = binding(&outcome, "annotated") else {
        panic!()
    };
    let counts: Vec<i64> = annotated
        .iter()
        .map(|g| {
            g.properties()
                .get("vertexCount")
                .and_then(PropertyValue::as_int)
                .unwrap()
        })
        .collect();
    assert_eq!(counts, vec![3, 3, 4]);
}

#[test]
fn summarized_communities_script_smoke() {
    // Two triangles joined by nothing: expect two communities of three.
    let mut db = EpgmDatabase::new();
    for _ in 0..6 {
        db.add_vertex("Person", props! {});
    }
    let forum = db.add_vertex("Forum", props! { "title" => "noise" });
    for (s, t) in [(0u64, 1u64), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
        db.add_edge(s, t, "knows", props! {}).unwrap();
        db.add_edge(t, s, "knows", props! {}).unwrap();
    }
    db.add_edge(forum, 0, "hasMember", props! {}).unwrap();

    let db = Rc::new(db);
    let sng = Value::Graph(db.database_graph());
    let outcome = run_with(
        include_str!("../../../scripts/summarized_communities.grala"),
        db,
        vec![("sng".to_string(), sng)],
    );
    let Value::Graph(summary) = binding(&outcome, "summarizedCommunities") else {
        panic!()
    };
    assert_eq!(summary.vertex_count(), 2);
    let sizes: Vec<i64> = summary
        .vertices()
        .map(|v| v.properties.get("count").unwrap().as_int().unwrap())
        .collect();
    assert_eq!(sizes, vec![3, 3]);
    // All twelve knows edges are accounted for; the forum edge is not.
    let edge_total: i64 = summary
        .edges()
        .map(|e| e.properties.get("count").unwrap().as_int().unwrap())
        .sum();
    assert_eq!(edge_total, 12);
}

#[test]
fn top_revenue_script_smoke() {
    let mut db = EpgmDatabase::new();
    let customer = db.add_vertex("Customer", props! {});
    for i in 0..3i64 {
        let quotation = db.add_vertex("SalesQuotation", props! {});
        let order = db.add_vertex("SalesOrder", props! {});
        db.add_edge(order, quotation, "basedOn", props! {}).unwrap();
        db.add_edge(quotation, customer, "sentTo", props! {})
            .unwrap();
        if i > 0 {
            let invoice = db.add_vertex("SalesInvoice", props! { "revenue" => (100 * i) as f64 });
            db.add_edge(invoice, order, "createdFor", props! {})
                .unwrap();
        }
    }
    let db = Rc::new(db);
    let iig = Value::Graph(db.database_graph());
    let outcome = run_with(
        include_str!("../../../scripts/top_revenue_cases.grala"),
        db,
        vec![("iig".to_string(), iig)],
    );
    let Value::Collection(btgs) = binding(&outcome, "btgs") else {
        panic!()
    };
    assert_eq!(btgs.len(), 3);
    let Value::Collection(tops) = binding(&outcome, "topRevBtgs") else {
        panic!()
    };
    // Only the two invoiced cases qualify, ordered by descending revenue.
    assert_eq!(tops.len(), 2);
    let revenues: Vec<f64> = tops
        .iter()
        .map(|g| g.properties().get("revenue").unwrap().as_number().unwrap())
        .collect();
    assert_eq!(revenues, vec![200.0, 100.0]);
    // The shared customer survives the overlap.
    let Value::Graph(overlap) = binding(&outcome, "topRevBtgOverlap") else {
        panic!()
    };
    assert_eq!(overlap.vertex_id_set(), BTreeSet::from([customer]));
}

#[test]
fn plain_assignment_and_arithmetic() {
    let outcome = run("x = 1\nx");
    assert_eq!(outcome.last, Some(Value::Int(1)));
    let outcome = run("y = (2 + 3) * 4 - 6 / 2");
    assert_eq!(binding(&outcome, "y"), &Value::Int(17));
    let outcome = run("z = 1 + 0.5");
    assert_eq!(binding(&outcome, "z"), &Value::Float(1.5));
}

#[test]
fn evaluation_is_deterministic() {
    let source = include_str!("../../../scripts/select_communities.grala");
    let a = run(source);
    let b = run(source);
    assert_eq!(a.bindings.len(), b.bindings.len());
    for ((name_a, value_a), (name_b, value_b)) in a.bindings.iter().zip(b.bindings.iter()) {
        assert_eq!(name_a, name_b);
        if matches!(value_a, Value::Lambda(_)) {
            continue;
        }
        assert_eq!(value_a, value_b, "binding {name_a} differs between runs");
    }
}

#[test]
fn scripts_do_not_mutate_the_database() {
    let db = Rc::new(example_db());
    let before: Vec<(u64, usize)> = db
        .graph_entries()
        .map(|g| (g.id, g.properties.len()))
        .collect();
    let _ = run_with(
        include_str!("../../../scripts/apply_aggregate.grala"),
        db.clone(),
        vec![],
    );
    let after: Vec<(u64, usize)> = db
        .graph_entries()
        .map(|g| (g.id, g.properties.len()))
        .collect();
    assert_eq!(before, after);
}

#[test]
fn runtime_errors_carry_positions() {
    let db = Rc::new(example_db());
    let registry = Rc::new(AlgorithmRegistry::new());

    // Unknown method.
    let err = run_script("db.G.frobnicate()", db.clone(), registry.clone(), vec![]).unwrap_err();
    assert!(matches!(err, GralaError::Eval { .. }));
    assert!(err.to_string().contains("frobnicate"));

    // Arity mismatch.
    let err = run_script("db.G.top()", db.clone(), registry.clone(), vec![]).unwrap_err();
    assert!(err.to_string().contains("missing an argument"));

    // Type error.
    let err = run_script("db.G.top(\"two\")", db.clone(), registry.clone(), vec![]).unwrap_err();
    assert!(err.to_string().contains("expects an integer"));

    // Unknown algorithm symbol.
    let err = run_script("db.G[0].callForGraph(:Nonsense,{})", db, registry, vec![]).unwrap_err();
    assert!(err.to_string().contains("Nonsense"));
}

#[test]
fn statement_timings_are_reported() {
    let outcome = run("x = 1\ny = 2");
    assert_eq!(outcome.timings.len(), 2);
    assert!(outcome.timings[0].statement.starts_with("x = "));
}
