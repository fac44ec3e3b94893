//! Binary graph operators: combination, overlap and exclusion. All three
//! work by element id over the shared spaces and return an unlabeled
//! temporary graph; both inputs must come from the same database.

use epgm_model::{LogicalGraph, Properties};

use crate::OperatorError;

fn check_same_source(g1: &LogicalGraph, g2: &LogicalGraph) -> Result<(), OperatorError> {
    if g1.same_source(g2) {
        Ok(())
    } else {
        Err(OperatorError::CrossDatabase)
    }
}

/// Merge two graphs: `V' = V1 ∪ V2`, `E' = E1 ∪ E2`.
pub fn combine(g1: &LogicalGraph, g2: &LogicalGraph) -> Result<LogicalGraph, OperatorError> {
    check_same_source(g1, g2)?;
    let vertices = g1.vertex_map().clone().union(g2.vertex_map().clone());
    let edges = g1.edge_map().clone().union(g2.edge_map().clone());
    Ok(LogicalGraph::from_parts(
        g1.id_source(),
        g1.id_source().fresh_id(),
        "",
        Properties::new(),
        vertices,
        edges,
    ))
}

/// Intersect two graphs: `V' = V1 ∩ V2`, `E' = E1 ∩ E2`.
pub fn overlap(g1: &LogicalGraph, g2: &LogicalGraph) -> Result<LogicalGraph, OperatorError> {
    check_same_source(g1, g2)?;
    let vertices = g1
        .vertex_map()
        .clone()
        .intersection(g2.vertex_map().clone());
    let edges = g1.edge_map().clone().intersection(g2.edge_map().clone());
    Ok(LogicalGraph::from_parts(
        g1.id_source(),
        g1.id_source().fresh_id(),
        "",
        Properties::new(),
        vertices,
        edges,
    ))
}

/// Elements of the first graph not occurring in the second: `V' = V1 \ V2`
/// and the edges of `E1` whose endpoints both survive in `V'`.
pub fn exclude(g1: &LogicalGraph, g2: &LogicalGraph) -> Result<LogicalGraph, OperatorError> {
    check_same_source(g1, g2)?;
    let vertices = g1
        .vertex_map()
        .clone()
        .relative_complement(g2.vertex_map().clone());
    let edges = g1
        .edge_map()
        .iter()
        .filter(|(_, e)| vertices.contains_key(&e.source) && vertices.contains_key(&e.target))
        .map(|(id, e)| (*id, e.clone()))
        .collect();
    Ok(LogicalGraph::from_parts(
        g1.id_source(),
        g1.id_source().fresh_id(),
        "",
        Properties::new(),
        vertices,
        edges,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::fixtures::example_db;
    use epgm_model::EpgmDatabase;
    use std::collections::BTreeSet;

    #[test]
    fn combine_of_the_example_communities() {
        let db = example_db();
        let combined = combine(&db.graph(0).unwrap(), &db.graph(2).unwrap()).unwrap();
        assert_eq!(combined.vertex_id_set(), BTreeSet::from([0, 1, 2, 3, 4]));
        assert_eq!(
            combined.edge_id_set(),
            BTreeSet::from([0, 1, 2, 3, 4, 5, 6, 21])
        );
        assert!(combined.is_temporary());
        combined.check_closure().unwrap();
    }

    #[test]
    fn overlap_of_the_example_communities() {
        let db = example_db();
        let shared = overlap(&db.graph(0).unwrap(), &db.graph(2).unwrap()).unwrap();
        assert_eq!(shared.vertex_id_set(), BTreeSet::from([0, 1]));
        assert_eq!(shared.edge_id_set(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn exclude_of_the_example_communities() {
        let db = example_db();
        let rest = exclude(&db.graph(0).unwrap(), &db.graph(2).unwrap()).unwrap();
        assert_eq!(rest.vertex_id_set(), BTreeSet::from([4]));
        assert!(rest.edge_id_set().is_empty());
    }

    #[test]
    fn combine_is_idempotent_and_has_identity() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let same = combine(&g0, &g0).unwrap();
        assert_eq!(same.vertex_id_set(), g0.vertex_id_set());
        assert_eq!(same.edge_id_set(), g0.edge_id_set());

        let empty = LogicalGraph::new(
            db.id_source(),
            db.id_source().fresh_id(),
            "",
            Default::default(),
        );
        let with_empty = combine(&g0, &empty).unwrap();
        assert_eq!(with_empty.vertex_id_set(), g0.vertex_id_set());
        assert_eq!(with_empty.edge_id_set(), g0.edge_id_set());
    }

    #[test]
    fn overlap_with_self_and_disjoint() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let g1 = db.graph(1).unwrap();
        let with_self = overlap(&g0, &g0).unwrap();
        assert_eq!(with_self.vertex_id_set(), g0.vertex_id_set());
        assert_eq!(with_self.edge_id_set(), g0.edge_id_set());
        let disjoint = overlap(&g0, &g1).unwrap();
        assert!(disjoint.is_empty());
    }

    #[test]
    fn exclude_self_and_empty() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let nothing = exclude(&g0, &g0).unwrap();
        assert!(nothing.is_empty());
        let empty = LogicalGraph::new(
            db.id_source(),
            db.id_source().fresh_id(),
            "",
            Default::default(),
        );
        let all = exclude(&g0, &empty).unwrap();
        assert_eq!(all.vertex_id_set(), g0.vertex_id_set());
        assert_eq!(all.edge_id_set(), g0.edge_id_set());
    }

    #[test]
    fn cross_database_inputs_are_rejected() {
        let db1 = example_db();
        let db2 = example_db();
        let err = combine(&db1.graph(0).unwrap(), &db2.graph(0).unwrap()).unwrap_err();
        assert!(matches!(err, OperatorError::CrossDatabase));
    }

    #[test]
    fn exclusion_edge_rule_is_literal() {
        // Build a graph pair where an excluded vertex strands edges.
        let mut db = EpgmDatabase::new();
        let a = db.add_vertex("X", Default::default());
        let b = db.add_vertex("X", Default::default());
        let c = db.add_vertex("X", Default::default());
        let ab = db.add_edge(a, b, "e", Default::default()).unwrap();
        let bc = db.add_edge(b, c, "e", Default::default()).unwrap();
        let g_all = db
            .create_logical_graph("G", Default::default(), [a, b, c], [ab, bc])
            .unwrap();
        let g_b = db
            .create_logical_graph("G", Default::default(), [b], [])
            .unwrap();
        let left = db.graph(g_all).unwrap();
        let right = db.graph(g_b).unwrap();
        let out = exclude(&left, &right).unwrap();
        // b is gone, so both edges lose an endpoint and must vanish.
        assert_eq!(out.vertex_id_set(), BTreeSet::from([a, c]));
        assert!(out.edge_id_set().is_empty());
    }
}
