//! Operators over graph collections: selection, duplicate elimination,
//! sorting, prefix selection, the set-theoretical operators and the
//! apply/reduce combinators.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use epgm_model::{GraphCollection, LogicalGraph, PropertyValue};

use crate::{DynError, OperatorError};

/// Keep the graphs satisfying `pred`, preserving input order. A failing
/// predicate aborts the selection and names the offending graph.
pub fn select<F>(coll: &GraphCollection, mut pred: F) -> Result<GraphCollection, OperatorError>
where
    F: FnMut(&LogicalGraph) -> Result<bool, DynError>,
{
    let mut out = Vec::new();
    for graph in coll {
        match pred(graph) {
            Ok(true) => out.push(graph.clone()),
            Ok(false) => {}
            Err(source) => {
                return Err(OperatorError::PredicateFailed {
                    graph: graph.id(),
                    source,
                })
            }
        }
    }
    Ok(out.into())
}

/// Drop duplicate graphs by head id, keeping the first occurrence.
pub fn distinct(coll: &GraphCollection) -> GraphCollection {
    let mut seen = BTreeSet::new();
    coll.iter()
        .filter(|g| seen.insert(g.id()))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// Stable sort on the graph property `key`. Graphs lacking the key order
/// after all graphs possessing it, stable among themselves, for either
/// direction. Values of incomparable kinds (string vs. number) are an error
/// naming two offending graphs.
pub fn sort_by(
    coll: &GraphCollection,
    key: &str,
    order: SortOrder,
) -> Result<GraphCollection, OperatorError> {
    let decorated: Vec<(&LogicalGraph, Option<&PropertyValue>)> =
        coll.iter().map(|g| (g, g.properties().get(key))).collect();

    // Comparison kind classes: {int, float} together, strings, bools.
    fn class(v: &PropertyValue) -> u8 {
        match v {
            PropertyValue::Int(_) | PropertyValue::Float(_) => 0,
            PropertyValue::Bool(_) => 1,
            PropertyValue::Str(_) => 2,
        }
    }
    let mut first_of_class: Option<(&LogicalGraph, u8)> = None;
    for (g, value) in &decorated {
        if let Some(v) = value {
            let c = class(v);
            match first_of_class {
                None => first_of_class = Some((g, c)),
                Some((other, oc)) if oc != c => {
                    return Err(OperatorError::SortTypeMismatch {
                        key: key.to_string(),
                        first: other.id(),
                        second: g.id(),
                    })
                }
                Some(_) => {}
            }
        }
    }

    let mut sorted = decorated;
    sorted.sort_by(|(_, a), (_, b)| match (a, b) {
        (Some(x), Some(y)) => {
            let ord = x.compare_promoting(y).expect("kind classes verified above");
            match order {
                SortOrder::Ascending => ord,
                SortOrder::Descending => ord.reverse(),
            }
        }
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    });
    Ok(sorted.into_iter().map(|(g, _)| g.clone()).collect())
}

/// First `n` graphs of the collection.
pub fn top(coll: &GraphCollection, n: usize) -> GraphCollection {
    coll.iter().take(n).cloned().collect()
}

/// Set union by graph id: the distinct first operand followed by graphs of
/// the second operand not yet seen, in their order.
pub fn union(coll: &GraphCollection, other: &GraphCollection) -> GraphCollection {
    let mut seen = BTreeSet::new();
    coll.iter()
        .chain(other.iter())
        .filter(|g| seen.insert(g.id()))
        .cloned()
        .collect()
}

/// Set intersection by graph id, ordered by the first operand.
pub fn intersect(coll: &GraphCollection, other: &GraphCollection) -> GraphCollection {
    let other_ids: BTreeSet<u64> = other.iter().map(|g| g.id()).collect();
    let mut seen = BTreeSet::new();
    coll.iter()
        .filter(|g| other_ids.contains(&g.id()) && seen.insert(g.id()))
        .cloned()
        .collect()
}

/// Set difference by graph id, ordered by the first operand.
pub fn difference(coll: &GraphCollection, other: &GraphCollection) -> GraphCollection {
    let other_ids: BTreeSet<u64> = other.iter().map(|g| g.id()).collect();
    let mut seen = BTreeSet::new();
    coll.iter()
        .filter(|g| !other_ids.contains(&g.id()) && seen.insert(g.id()))
        .cloned()
        .collect()
}

/// Apply a unary graph operator to every element; results keep input order
/// and `|out| == |in|`. A failing operand aborts with the element index.
pub fn apply<F>(coll: &GraphCollection, mut op: F) -> Result<GraphCollection, OperatorError>
where
    F: FnMut(&LogicalGraph) -> Result<LogicalGraph, DynError>,
{
    let mut out = Vec::with_capacity(coll.len());
    for (index, graph) in coll.iter().enumerate() {
        out.push(op(graph).map_err(|source| OperatorError::ApplyFailed { index, source })?);
    }
    Ok(out.into())
}

/// Strict left fold of a binary graph operator over the collection:
/// `op(..op(op(g1, g2), g3).., gn)`. The accumulator is passed by value so
/// cheap-to-clone graph representations fold without copying.
pub fn reduce<F>(coll: &GraphCollection, mut op: F) -> Result<LogicalGraph, OperatorError>
where
    F: FnMut(LogicalGraph, &LogicalGraph) -> Result<LogicalGraph, DynError>,
{
    let mut iter = coll.iter().enumerate();
    let (_, first) = iter.next().ok_or(OperatorError::EmptyReduce)?;
    let mut acc = first.clone();
    for (index, graph) in iter {
        acc = op(acc, graph).map_err(|source| OperatorError::ReduceFailed { index, source })?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::combine;
    use epgm_model::fixtures::example_db;
    use epgm_model::PropertyValue;

    fn example_collection() -> GraphCollection {
        example_db().graphs()
    }

    #[test]
    fn select_by_vertex_count() {
        let coll = example_collection();
        let result = select(&coll, |g| {
            Ok(g.properties()
                .get("vertexCount")
                .and_then(PropertyValue::as_int)
                .is_some_and(|n| n > 3))
        })
        .unwrap();
        assert_eq!(result.ids(), vec![2]);
    }

    #[test]
    fn select_true_is_identity() {
        let coll = example_collection();
        let result = select(&coll, |_| Ok(true)).unwrap();
        assert_eq!(result, coll);
    }

    #[test]
    fn select_with_nested_vertex_predicate() {
        // Graphs where every vertex is older than 20: exactly G1.
        let coll = example_collection();
        let result = select(&coll, |g| {
            let grown = g
                .vertices()
                .filter(|v| {
                    v.properties
                        .get("age")
                        .and_then(PropertyValue::as_int)
                        .is_some_and(|a| a > 20)
                })
                .count() as i64;
            Ok(g.properties()
                .get("vertexCount")
                .and_then(PropertyValue::as_int)
                == Some(grown))
        })
        .unwrap();
        assert_eq!(result.ids(), vec![1]);
    }

    #[test]
    fn select_propagates_predicate_failure_with_graph_id() {
        let coll = example_collection();
        let err = select(&coll, |g| {
            if g.id() == 1 {
                Err("boom".into())
            } else {
                Ok(true)
            }
        })
        .unwrap_err();
        assert!(matches!(
            err,
            OperatorError::PredicateFailed { graph: 1, .. }
        ));
    }

    #[test]
    fn distinct_dedups_by_id_keeping_first() {
        let db = example_db();
        let coll: GraphCollection = vec![
            db.graph(0).unwrap(),
            db.graph(1).unwrap(),
            db.graph(0).unwrap(),
        ]
        .into();
        assert_eq!(distinct(&coll).ids(), vec![0, 1]);
        let already = example_collection();
        assert_eq!(distinct(&already), already);
        assert_eq!(distinct(&GraphCollection::new()).len(), 0);
    }

    #[test]
    fn sort_by_vertex_count_descending() {
        // G2 has 4 vertices, G0 and G1 tie at 3 and keep input order.
        let coll = example_collection();
        let sorted = sort_by(&coll, "vertexCount", SortOrder::Descending).unwrap();
        assert_eq!(sorted.ids(), vec![2, 0, 1]);
    }

    #[test]
    fn sort_singleton_unchanged_and_orders_reverse() {
        let db = example_db();
        let single: GraphCollection = vec![db.graph(0).unwrap()].into();
        assert_eq!(
            sort_by(&single, "vertexCount", SortOrder::Ascending).unwrap(),
            single
        );

        // Strictly distinct keys: ascending is the reverse of descending.
        let mut coll = example_collection();
        // Make the keys strictly distinct by dropping the tie.
        coll = vec![coll.get(1).unwrap().clone(), coll.get(2).unwrap().clone()].into();
        let asc = sort_by(&coll, "vertexCount", SortOrder::Ascending).unwrap();
        let desc = sort_by(&coll, "vertexCount", SortOrder::Descending).unwrap();
        let mut reversed: Vec<u64> = desc.ids();
        reversed.reverse();
        assert_eq!(asc.ids(), reversed);
    }

    #[test]
    fn sort_with_missing_keys_puts_them_last() {
        let mut db = example_db();
        let extra = db
            .create_logical_graph("Community", epgm_model::props! {}, [], [])
            .unwrap();
        let coll: GraphCollection = vec![
            db.graph(extra).unwrap(),
            db.graph(0).unwrap(),
            db.graph(2).unwrap(),
        ]
        .into();
        let sorted = sort_by(&coll, "vertexCount", SortOrder::Descending).unwrap();
        assert_eq!(sorted.ids(), vec![2, 0, extra]);
        let sorted_asc = sort_by(&coll, "vertexCount", SortOrder::Ascending).unwrap();
        assert_eq!(sorted_asc.ids(), vec![0, 2, extra]);
    }

    #[test]
    fn sort_mixed_kinds_errors_with_both_ids() {
        let mut db = example_db();
        let odd = db
            .create_logical_graph(
                "Community",
                epgm_model::props! { "vertexCount" => "three" },
                [],
                [],
            )
            .unwrap();
        let coll: GraphCollection = vec![db.graph(0).unwrap(), db.graph(odd).unwrap()].into();
        let err = sort_by(&coll, "vertexCount", SortOrder::Ascending).unwrap_err();
        match err {
            OperatorError::SortTypeMismatch { first, second, .. } => {
                assert_eq!((first, second), (0, odd));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn top_takes_a_prefix() {
        let coll = example_collection();
        let sorted = sort_by(&coll, "vertexCount", SortOrder::Descending).unwrap();
        assert_eq!(top(&sorted, 2).ids(), vec![2, 0]);
        assert_eq!(top(&coll, 0).len(), 0);
        assert_eq!(top(&coll, 10), coll);
    }

    #[test]
    fn set_operators_work_by_graph_id() {
        let db = example_db();
        let left: GraphCollection = vec![db.graph(0).unwrap(), db.graph(1).unwrap()].into();
        let right: GraphCollection = vec![db.graph(1).unwrap(), db.graph(2).unwrap()].into();

        assert_eq!(intersect(&left, &right).ids(), vec![1]);
        assert_eq!(union(&left, &right).ids(), vec![0, 1, 2]);
        assert_eq!(difference(&left, &right).ids(), vec![0]);

        // X ∪ ∅ = distinct(X); X \ X = ∅.
        let dup: GraphCollection = vec![
            db.graph(0).unwrap(),
            db.graph(0).unwrap(),
            db.graph(1).unwrap(),
        ]
        .into();
        assert_eq!(union(&dup, &GraphCollection::new()).ids(), vec![0, 1]);
        assert_eq!(difference(&dup, &dup).len(), 0);
    }

    #[test]
    fn apply_maps_elementwise_in_order() {
        let coll = example_collection();
        let result = apply(&coll, |g| {
            crate::unary::aggregate(g, "vertexCount", |g| {
                Ok(PropertyValue::Int(g.vertex_count() as i64))
            })
            .map_err(Into::into)
        })
        .unwrap();
        assert_eq!(result.len(), coll.len());
        let counts: Vec<i64> = result
            .iter()
            .map(|g| {
                g.properties()
                    .get("vertexCount")
                    .and_then(PropertyValue::as_int)
                    .unwrap()
            })
            .collect();
        assert_eq!(counts, vec![3, 3, 4]);

        assert_eq!(
            apply(&GraphCollection::new(), |g| Ok(g.clone()))
                .unwrap()
                .len(),
            0
        );
        assert_eq!(apply(&coll, |g| Ok(g.clone())).unwrap(), coll);
    }

    #[test]
    fn apply_failure_reports_index() {
        let coll = example_collection();
        let err = apply(&coll, |g| {
            if g.id() == 1 {
                Err("nope".into())
            } else {
                Ok(g.clone())
            }
        })
        .unwrap_err();
        assert!(matches!(err, OperatorError::ApplyFailed { index: 1, .. }));
    }

    #[test]
    fn reduce_is_a_strict_left_fold() {
        let coll = example_collection();
        let folded = reduce(&coll, |acc, g| combine(&acc, g).map_err(Into::into)).unwrap();

        // Equivalent explicit pairwise calls.
        let ab = combine(coll.get(0).unwrap(), coll.get(1).unwrap()).unwrap();
        let abc = combine(&ab, coll.get(2).unwrap()).unwrap();
        assert_eq!(folded.vertex_id_set(), abc.vertex_id_set());
        assert_eq!(folded.edge_id_set(), abc.edge_id_set());

        // Singleton reduces to its only element.
        let single: GraphCollection = vec![coll.get(0).unwrap().clone()].into();
        let one = reduce(&single, |acc, g| combine(&acc, g).map_err(Into::into)).unwrap();
        assert_eq!(&one, single.get(0).unwrap());

        assert!(matches!(
            reduce(&GraphCollection::new(), |acc, _| Ok(acc)),
            Err(OperatorError::EmptyReduce)
        ));
    }
}
