//! Synchronous label propagation community detection, made deterministic:
//! every vertex starts labeled with its own id, each round every vertex
//! adopts the most frequent label among its neighbors (undirected view) with
//! ties broken by the smallest label, and iteration stops at a fixpoint or
//! after the round budget.

use std::collections::BTreeMap;

use epgm_model::{GraphCollection, LogicalGraph, Properties, PropertyValue};
use im::OrdMap;
use std::sync::Arc;

use crate::AlgorithmError;

pub const DEFAULT_MAX_ITERATIONS: u32 = 20;

/// Annotate every vertex of the graph with a community id under
/// `property_key`. Community ids are drawn from the vertex id space.
pub fn label_propagation(
    graph: &LogicalGraph,
    property_key: &str,
    max_iterations: u32,
) -> LogicalGraph {
    let vertex_ids: Vec<u64> = graph.vertex_ids().collect();
    let index_of: BTreeMap<u64, usize> = vertex_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, i))
        .collect();

    // Undirected neighbor lists; parallel edges contribute multiplicity and
    // a loop makes a vertex its own neighbor.
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); vertex_ids.len()];
    for edge in graph.edges() {
        let s = index_of[&edge.source];
        let t = index_of[&edge.target];
        neighbors[s].push(t);
        neighbors[t].push(s);
    }

    let mut labels: Vec<u64> = vertex_ids.clone();
    let mut next = labels.clone();
    for _ in 0..max_iterations {
        let mut changed = false;
        for (v, neigh) in neighbors.iter().enumerate() {
            if neigh.is_empty() {
                next[v] = labels[v];
                continue;
            }
            let mut freq: BTreeMap<u64, usize> = BTreeMap::new();
            for &n in neigh {
                *freq.entry(labels[n]).or_insert(0) += 1;
            }
            // Most frequent label, smallest label on ties; BTreeMap order
            // makes the first maximal entry the smallest label.
            let best = freq
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(label, _)| *label)
                .unwrap();
            if best != labels[v] {
                changed = true;
            }
            next[v] = best;
        }
        std::mem::swap(&mut labels, &mut next);
        if !changed {
            break;
        }
    }

    let vertices: OrdMap<u64, Arc<epgm_model::Vertex>> = graph
        .vertices()
        .map(|v| {
            let mut nv = (**v).clone();
            nv.properties
                .set(property_key, labels[index_of[&v.id]] as i64);
            (v.id, Arc::new(nv))
        })
        .collect();

    LogicalGraph::from_parts(
        graph.id_source(),
        graph.id(),
        graph.label().to_string(),
        graph.properties().clone(),
        vertices,
        graph.edge_map().clone(),
    )
}

/// Split an annotated graph into one logical graph per distinct community
/// value: the community's vertices plus all edges internal to it. Every
/// vertex must carry `vertex_key`; each output graph stores its community id
/// under `graph_key`. Output order follows ascending community value.
pub fn community_split(
    graph: &LogicalGraph,
    vertex_key: &str,
    graph_key: &str,
) -> Result<GraphCollection, AlgorithmError> {
    let mut groups: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for v in graph.vertices() {
        let value =
            v.properties
                .get(vertex_key)
                .ok_or_else(|| AlgorithmError::MissingProperty {
                    key: vertex_key.to_string(),
                    vertex: v.id,
                })?;
        let community = value
            .as_int()
            .ok_or_else(|| AlgorithmError::MissingProperty {
                key: vertex_key.to_string(),
                vertex: v.id,
            })?;
        groups.entry(community).or_default().push(v.id);
    }

    let ids = graph.id_source();
    let mut out = Vec::with_capacity(groups.len());
    for (community, members) in groups {
        let vertices: OrdMap<u64, Arc<epgm_model::Vertex>> = members
            .iter()
            .map(|id| (*id, graph.vertex(*id).unwrap().clone()))
            .collect();
        let edges: OrdMap<u64, Arc<epgm_model::Edge>> = graph
            .edges()
            .filter(|e| vertices.contains_key(&e.source) && vertices.contains_key(&e.target))
            .map(|e| (e.id, e.clone()))
            .collect();
        let mut props = Properties::new();
        props.set(graph_key, PropertyValue::Int(community));
        out.push(LogicalGraph::from_parts(
            ids,
            ids.fresh_id(),
            "Community",
            props,
            vertices,
            edges,
        ));
    }
    Ok(out.into())
}
