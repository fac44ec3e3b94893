//! Unary graph operators: aggregation and projection.

use epgm_model::{Edge, LogicalGraph, PropertyValue, Vertex, DETACHED_ID};
use im::OrdMap;
use std::sync::Arc;

use crate::{DynError, OperatorError};

/// Attach `key = α(g)` to a copy of the graph; everything else, including
/// the head id, stays as it was.
pub fn aggregate<F>(graph: &LogicalGraph, key: &str, agg: F) -> Result<LogicalGraph, OperatorError>
where
    F: FnOnce(&LogicalGraph) -> Result<PropertyValue, DynError>,
{
    let value = agg(graph).map_err(|source| OperatorError::AggregateFailed { source })?;
    if !value.is_numeric() {
        return Err(OperatorError::AggregateNotNumeric {
            key: key.to_string(),
        });
    }
    let mut out = graph.clone();
    out.set_property(key, value);
    Ok(out)
}

/// Rewrite labels and properties of every vertex and edge through the
/// projection functions, keeping ids and adjacency untouched. Replacement
/// elements built detached adopt the id (and endpoints) of the element they
/// replace; an explicit mismatch is a structure violation.
pub fn project<VF, EF>(
    graph: &LogicalGraph,
    mut vertex_fn: VF,
    mut edge_fn: EF,
) -> Result<LogicalGraph, OperatorError>
where
    VF: FnMut(&Vertex) -> Result<Vertex, DynError>,
    EF: FnMut(&Edge) -> Result<Edge, DynError>,
{
    let mut vertices = OrdMap::new();
    for v in graph.vertices() {
        let mut nv = vertex_fn(v).map_err(|source| OperatorError::ProjectionFailed {
            element: "vertex",
            id: v.id,
            source,
        })?;
        if nv.id == DETACHED_ID {
            nv.id = v.id;
        } else if nv.id != v.id {
            return Err(OperatorError::StructureViolation {
                element: "vertex",
                id: v.id,
                what: "id",
            });
        }
        nv.graph_ids = v.graph_ids.clone();
        vertices.insert(nv.id, Arc::new(nv));
    }
    let mut edges = OrdMap::new();
    for e in graph.edges() {
        let mut ne = edge_fn(e).map_err(|source| OperatorError::ProjectionFailed {
            element: "edge",
            id: e.id,
            source,
        })?;
        if ne.id == DETACHED_ID && ne.source == DETACHED_ID && ne.target == DETACHED_ID {
            ne.id = e.id;
            ne.source = e.source;
            ne.target = e.target;
            ne.source_index = e.source_index;
        } else if ne.id != e.id {
            return Err(OperatorError::StructureViolation {
                element: "edge",
                id: e.id,
                what: "id",
            });
        } else if ne.source != e.source || ne.target != e.target {
            return Err(OperatorError::StructureViolation {
                element: "edge",
                id: e.id,
                what: "endpoints",
            });
        } else if ne.source_index != e.source_index {
            return Err(OperatorError::StructureViolation {
                element: "edge",
                id: e.id,
                what: "source index",
            });
        }
        ne.graph_ids = e.graph_ids.clone();
        edges.insert(ne.id, Arc::new(ne));
    }
    Ok(LogicalGraph::from_parts(
        graph.id_source(),
        graph.id_source().fresh_id(),
        graph.label().to_string(),
        graph.properties().clone(),
        vertices,
        edges,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::fixtures::example_db;
    use epgm_model::{props, Properties};

    #[test]
    fn aggregate_sets_exactly_one_property() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let out = aggregate(&g0, "vertexCount", |g| {
            Ok(PropertyValue::Int(g.vertex_count() as i64))
        })
        .unwrap();
        assert_eq!(
            out.properties().get("vertexCount"),
            Some(&PropertyValue::Int(3))
        );
        assert_eq!(out.id(), g0.id());
        assert_eq!(out.vertex_id_set(), g0.vertex_id_set());
        // Everything except the aggregated key matches the input.
        for (k, v) in g0.properties().iter() {
            if k != "vertexCount" {
                assert_eq!(out.properties().get(k), Some(v));
            }
        }
    }

    #[test]
    fn aggregate_constant_on_empty_graph() {
        let mut db = epgm_model::EpgmDatabase::new();
        let gid = db.create_logical_graph("G", props! {}, [], []).unwrap();
        let g = db.graph(gid).unwrap();
        let out = aggregate(&g, "total", |_| Ok(PropertyValue::Int(0))).unwrap();
        assert_eq!(out.properties().get("total"), Some(&PropertyValue::Int(0)));
    }

    #[test]
    fn aggregate_sum_of_ages() {
        let mut db = epgm_model::EpgmDatabase::new();
        let mut ids = Vec::new();
        for age in [20i64, 25, 30] {
            ids.push(db.add_vertex("Person", props! { "age" => age }));
        }
        let gid = db
            .create_logical_graph("G", props! {}, ids.clone(), [])
            .unwrap();
        let g = db.graph(gid).unwrap();
        let out = aggregate(&g, "ageSum", |g| {
            let vs: Vec<_> = g.vertices().cloned().collect();
            crate::aggregates::sum(&vs, "age").map_err(Into::into)
        })
        .unwrap();
        // 20 + 25 + 30
        assert_eq!(
            out.properties().get("ageSum"),
            Some(&PropertyValue::Int(75))
        );
    }

    #[test]
    fn aggregate_failure_propagates() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let err = aggregate(&g0, "x", |_| Err("broken".into())).unwrap_err();
        assert!(matches!(err, OperatorError::AggregateFailed { .. }));
    }

    #[test]
    fn project_rewrites_labels_and_properties_only() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        // Vertices keep only "from" = old "city" and take the old "name" as
        // label; edges keep their label and lose all properties.
        let out = project(
            &g0,
            |v| {
                let name = v.properties.get("name").cloned().unwrap();
                let mut props = Properties::new();
                if let Some(city) = v.properties.get("city") {
                    props.set("from", city.clone());
                }
                Ok(Vertex::detached(name.to_string(), props))
            },
            |e| Ok(Edge::detached(e.label.clone(), Properties::new())),
        )
        .unwrap();

        assert_eq!(out.vertex_id_set(), g0.vertex_id_set());
        assert_eq!(out.edge_id_set(), g0.edge_id_set());
        let alice = out.vertex(0).unwrap();
        assert_eq!(alice.label, "Alice");
        assert_eq!(
            alice.properties.get("from"),
            Some(&PropertyValue::Str("Leipzig".into()))
        );
        assert_eq!(alice.properties.len(), 1);
        for e in out.edges() {
            assert_eq!(e.label, "knows");
            assert!(e.properties.is_empty());
            let original = g0.edge(e.id).unwrap();
            assert_eq!((e.source, e.target), (original.source, original.target));
        }
    }

    #[test]
    fn project_identity_preserves_content() {
        let db = example_db();
        let g2 = db.graph(2).unwrap();
        let out = project(&g2, |v| Ok(v.clone()), |e| Ok(e.clone())).unwrap();
        assert_eq!(out.vertex_map(), g2.vertex_map());
        assert_eq!(out.edge_map(), g2.edge_map());
        assert_eq!(out.vertex_count(), g2.vertex_count());
        assert_eq!(out.edge_count(), g2.edge_count());
    }

    #[test]
    fn project_rejects_endpoint_changes() {
        let db = example_db();
        let g0 = db.graph(0).unwrap();
        let err = project(
            &g0,
            |v| Ok(v.clone()),
            |e| {
                let mut ne = e.clone();
                ne.target = e.source;
                Ok(ne)
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            OperatorError::StructureViolation {
                element: "edge",
                what: "endpoints",
                ..
            }
        ));
    }
}
