//! The in-memory database: shared vertex/edge spaces plus the registered
//! logical graph set, with element-level CRUD and graph materialization.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::DATABASE_GRAPH_ID;
use crate::{
    Edge, GraphCollection, IdSource, LogicalGraph, ModelError, Properties, PropertyValue, Vertex,
};

/// Registered entry of the logical graph set: head data plus member id sets.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphEntry {
    pub id: u64,
    pub label: String,
    pub properties: Properties,
    pub vertex_ids: BTreeSet<u64>,
    pub edge_ids: BTreeSet<u64>,
}

/// Shared vertex space, edge space and logical graph set. Graphs may overlap
/// arbitrarily; the database graph over the full spaces is always derivable.
///
/// Single writer, any number of readers: all mutation goes through `&mut
/// self`, and everything handed out to operators is an immutable snapshot.
#[derive(Debug)]
pub struct EpgmDatabase {
    vertices: BTreeMap<u64, Vertex>,
    edges: BTreeMap<u64, Edge>,
    graphs: BTreeMap<u64, GraphEntry>,
    next_vertex_id: u64,
    next_edge_id: u64,
    next_graph_id: u64,
    /// Next free per-source edge index, per vertex.
    next_edge_index: BTreeMap<u64, u32>,
    /// (source, per-source index) -> edge id; the parallel-edge identity.
    edges_by_source: BTreeMap<(u64, u32), u64>,
    ids: IdSource,
}

impl EpgmDatabase {
    /// Empty database: all spaces empty, id counters at zero.
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        EpgmDatabase {
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            graphs: BTreeMap::new(),
            next_vertex_id: 0,
            next_edge_id: 0,
            next_graph_id: 0,
            next_edge_index: BTreeMap::new(),
            edges_by_source: BTreeMap::new(),
            ids: IdSource::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn graph_count(&self) -> usize {
        self.graphs.len()
    }

    pub fn id_source(&self) -> &IdSource {
        &self.ids
    }

    // ------------------------------------------------------------------
    // Element CRUD

    /// Add a vertex with a fresh dense id; it belongs to no graph yet.
    pub fn add_vertex(&mut self, label: impl Into<String>, properties: Properties) -> u64 {
        let id = self.next_vertex_id;
        self.next_vertex_id += 1;
        self.vertices.insert(id, Vertex::new(id, label, properties));
        id
    }

    /// Add an edge with a fresh id; the per-source index is the source's
    /// current counter, which is then incremented. Parallel edges and loops
    /// are permitted.
    pub fn add_edge(
        &mut self,
        source: u64,
        target: u64,
        label: impl Into<String>,
        properties: Properties,
    ) -> Result<u64, ModelError> {
        let index = self.next_edge_index.get(&source).copied().unwrap_or(0);
        self.add_edge_with_index(source, target, label, properties, index)
    }

    /// Add an edge with an explicit per-source index, as bulk loading does.
    /// `(source, index)` must be unused.
    pub fn add_edge_with_index(
        &mut self,
        source: u64,
        target: u64,
        label: impl Into<String>,
        properties: Properties,
        index: u32,
    ) -> Result<u64, ModelError> {
        if !self.vertices.contains_key(&source) {
            return Err(ModelError::DanglingEndpoint { vertex: source });
        }
        if !self.vertices.contains_key(&target) {
            return Err(ModelError::DanglingEndpoint { vertex: target });
        }
        if self.edges_by_source.contains_key(&(source, index)) {
            return Err(ModelError::DuplicateEdgeIndex {
                vertex: source,
                index,
            });
        }
        let id = self.next_edge_id;
        self.next_edge_id += 1;
        self.edges
            .insert(id, Edge::new(id, source, target, index, label, properties));
        self.edges_by_source.insert((source, index), id);
        let next = self.next_edge_index.entry(source).or_insert(0);
        *next = (*next).max(index + 1);
        Ok(id)
    }

    /// Register a logical graph over existing elements. Every edge's source
    /// and target must be in `vertex_ids` (subgraph closure); membership is
    /// recorded on the graph entry and mirrored onto the member elements.
    pub fn create_logical_graph(
        &mut self,
        label: impl Into<String>,
        properties: Properties,
        vertex_ids: impl IntoIterator<Item = u64>,
        edge_ids: impl IntoIterator<Item = u64>,
    ) -> Result<u64, ModelError> {
        let vertex_ids: BTreeSet<u64> = vertex_ids.into_iter().collect();
        let edge_ids: BTreeSet<u64> = edge_ids.into_iter().collect();
        for &vid in &vertex_ids {
            if !self.vertices.contains_key(&vid) {
                return Err(ModelError::UnknownVertex(vid));
            }
        }
        for &eid in &edge_ids {
            let edge = self.edges.get(&eid).ok_or(ModelError::UnknownEdge(eid))?;
            if !vertex_ids.contains(&edge.source) || !vertex_ids.contains(&edge.target) {
                return Err(ModelError::ClosureViolation { edge: eid });
            }
        }
        let id = self.next_graph_id;
        self.next_graph_id += 1;
        for &vid in &vertex_ids {
            self.vertices.get_mut(&vid).unwrap().graph_ids.insert(id);
        }
        for &eid in &edge_ids {
            self.edges.get_mut(&eid).unwrap().graph_ids.insert(id);
        }
        self.graphs.insert(
            id,
            GraphEntry {
                id,
                label: label.into(),
                properties,
                vertex_ids,
                edge_ids,
            },
        );
        Ok(id)
    }

    // ------------------------------------------------------------------
    // Raw insertion with explicit ids (bulk load path)

    pub fn insert_vertex(&mut self, vertex: Vertex) -> Result<(), ModelError> {
        if self.vertices.contains_key(&vertex.id) {
            return Err(ModelError::IdCollision {
                space: "vertex",
                id: vertex.id,
            });
        }
        self.next_vertex_id = self.next_vertex_id.max(vertex.id + 1);
        self.vertices.insert(vertex.id, vertex);
        Ok(())
    }

    pub fn insert_edge(&mut self, edge: Edge) -> Result<(), ModelError> {
        if self.edges.contains_key(&edge.id) {
            return Err(ModelError::IdCollision {
                space: "edge",
                id: edge.id,
            });
        }
        if !self.vertices.contains_key(&edge.source) {
            return Err(ModelError::DanglingEndpoint {
                vertex: edge.source,
            });
        }
        if !self.vertices.contains_key(&edge.target) {
            return Err(ModelError::DanglingEndpoint {
                vertex: edge.target,
            });
        }
        if self
            .edges_by_source
            .contains_key(&(edge.source, edge.source_index))
        {
            return Err(ModelError::DuplicateEdgeIndex {
                vertex: edge.source,
                index: edge.source_index,
            });
        }
        self.next_edge_id = self.next_edge_id.max(edge.id + 1);
        let next = self.next_edge_index.entry(edge.source).or_insert(0);
        *next = (*next).max(edge.source_index + 1);
        self.edges_by_source
            .insert((edge.source, edge.source_index), edge.id);
        self.edges.insert(edge.id, edge);
        Ok(())
    }

    pub fn insert_graph(
        &mut self,
        id: u64,
        label: impl Into<String>,
        properties: Properties,
        vertex_ids: impl IntoIterator<Item = u64>,
        edge_ids: impl IntoIterator<Item = u64>,
    ) -> Result<(), ModelError> {
        if self.graphs.contains_key(&id) {
            return Err(ModelError::IdCollision { space: "graph", id });
        }
        let vertex_ids: BTreeSet<u64> = vertex_ids.into_iter().collect();
        let edge_ids: BTreeSet<u64> = edge_ids.into_iter().collect();
        for &vid in &vertex_ids {
            if !self.vertices.contains_key(&vid) {
                return Err(ModelError::UnknownVertex(vid));
            }
        }
        for &eid in &edge_ids {
            let edge = self.edges.get(&eid).ok_or(ModelError::UnknownEdge(eid))?;
            if !vertex_ids.contains(&edge.source) || !vertex_ids.contains(&edge.target) {
                return Err(ModelError::ClosureViolation { edge: eid });
            }
        }
        self.next_graph_id = self.next_graph_id.max(id + 1);
        for &vid in &vertex_ids {
            self.vertices.get_mut(&vid).unwrap().graph_ids.insert(id);
        }
        for &eid in &edge_ids {
            self.edges.get_mut(&eid).unwrap().graph_ids.insert(id);
        }
        self.graphs.insert(
            id,
            GraphEntry {
                id,
                label: label.into(),
                properties,
                vertex_ids,
                edge_ids,
            },
        );
        Ok(())
    }

    // ------------------------------------------------------------------
    // Reads

    pub fn vertex(&self, id: u64) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: u64) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn graph_entry(&self, id: u64) -> Option<&GraphEntry> {
        self.graphs.get(&id)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn graph_entries(&self) -> impl Iterator<Item = &GraphEntry> {
        self.graphs.values()
    }

    /// Outgoing edges of a vertex in per-source index order.
    pub fn out_edges(&self, vertex: u64) -> Vec<&Edge> {
        self.edges_by_source
            .range((vertex, 0)..=(vertex, u32::MAX))
            .map(|(_, id)| &self.edges[id])
            .collect()
    }

    /// Edge id carrying the persistent (source, index) identity.
    pub fn edge_by_source_index(&self, source: u64, index: u32) -> Option<u64> {
        self.edges_by_source.get(&(source, index)).copied()
    }

    /// Next free per-source edge index for a vertex (0 when it has no
    /// outgoing edges).
    pub fn next_out_index(&self, vertex: u64) -> u32 {
        self.next_edge_index.get(&vertex).copied().unwrap_or(0)
    }

    pub fn get_vertex_property(&self, id: u64, key: &str) -> Option<&PropertyValue> {
        self.vertices.get(&id).and_then(|v| v.properties.get(key))
    }

    pub fn set_vertex_property(
        &mut self,
        id: u64,
        key: impl Into<String>,
        value: impl Into<PropertyValue>,
    ) -> Result<(), ModelError> {
        let vertex = self
            .vertices
            .get_mut(&id)
            .ok_or(ModelError::UnknownVertex(id))?;
        vertex.properties.set(key, value);
        Ok(())
    }

    pub fn get_edge_property(&self, id: u64, key: &str) -> Option<&PropertyValue> {
        self.edges.get(&id).and_then(|e| e.properties.get(key))
    }

    pub fn set_edge_property(
        &mut self,
        id: u64,
        key: impl Into<String>,
        value: impl Into<PropertyValue>,
    ) -> Result<(), ModelError> {
        let edge = self.edges.get_mut(&id).ok_or(ModelError::UnknownEdge(id))?;
        edge.properties.set(key, value);
        Ok(())
    }

    pub fn get_graph_property(&self, id: u64, key: &str) -> Option<&PropertyValue> {
        self.graphs.get(&id).and_then(|g| g.properties.get(key))
    }

    pub fn set_graph_property(
        &mut self,
        id: u64,
        key: impl Into<String>,
        value: impl Into<PropertyValue>,
    ) -> Result<(), ModelError> {
        let graph = self
            .graphs
            .get_mut(&id)
            .ok_or(ModelError::UnknownGraph(id))?;
        graph.properties.set(key, value);
        Ok(())
    }

    // ------------------------------------------------------------------
    // Materialization

    /// Materialize a registered logical graph as a self-contained value.
    pub fn graph(&self, id: u64) -> Option<LogicalGraph> {
        let entry = self.graphs.get(&id)?;
        let vertices = entry
            .vertex_ids
            .iter()
            .map(|vid| self.vertices[vid].clone());
        let edges = entry.edge_ids.iter().map(|eid| self.edges[eid].clone());
        Some(
            LogicalGraph::with_elements(
                &self.ids,
                entry.id,
                entry.label.clone(),
                entry.properties.clone(),
                vertices,
                edges,
            )
            .expect("registered graphs satisfy closure"),
        )
    }

    /// All registered logical graphs, in ascending id order.
    pub fn graphs(&self) -> GraphCollection {
        self.graphs
            .keys()
            .map(|&id| self.graph(id).unwrap())
            .collect()
    }

    /// The virtual database graph spanning the full vertex and edge spaces.
    /// It is derivable at any time and never stored in the graph set.
    pub fn database_graph(&self) -> LogicalGraph {
        LogicalGraph::with_elements(
            &self.ids,
            DATABASE_GRAPH_ID,
            "",
            Properties::new(),
            self.vertices.values().cloned(),
            self.edges.values().cloned(),
        )
        .expect("the full spaces satisfy closure")
    }

    // ------------------------------------------------------------------
    // Audits

    /// Verify closure, membership symmetry and parallel-edge identity across
    /// the whole database. Intended for tests after mutation sequences.
    pub fn assert_consistent(&self) {
        let mut seen = BTreeSet::new();
        for edge in self.edges.values() {
            assert!(
                self.vertices.contains_key(&edge.source)
                    && self.vertices.contains_key(&edge.target),
                "edge {} has a dangling endpoint",
                edge.id
            );
            assert!(
                seen.insert((edge.source, edge.source_index)),
                "duplicate (source, index) pair ({}, {})",
                edge.source,
                edge.source_index
            );
        }
        for entry in self.graphs.values() {
            for &eid in &entry.edge_ids {
                let edge = &self.edges[&eid];
                assert!(
                    entry.vertex_ids.contains(&edge.source)
                        && entry.vertex_ids.contains(&edge.target),
                    "graph {} violates closure at edge {}",
                    entry.id,
                    eid
                );
            }
            for &vid in &entry.vertex_ids {
                assert!(
                    self.vertices[&vid].graph_ids.contains(&entry.id),
                    "vertex {vid} missing membership of graph {}",
                    entry.id
                );
            }
            for &eid in &entry.edge_ids {
                assert!(
                    self.edges[&eid].graph_ids.contains(&entry.id),
                    "edge {eid} missing membership of graph {}",
                    entry.id
                );
            }
        }
        for vertex in self.vertices.values() {
            for gid in &vertex.graph_ids {
                assert!(
                    self.graphs[gid].vertex_ids.contains(&vertex.id),
                    "graph {gid} does not list vertex {}",
                    vertex.id
                );
            }
        }
        for edge in self.edges.values() {
            for gid in &edge.graph_ids {
                assert!(
                    self.graphs[gid].edge_ids.contains(&edge.id),
                    "graph {gid} does not list edge {}",
                    edge.id
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props;

    #[test]
    fn create_database_is_empty() {
        let db = EpgmDatabase::new();
        assert_eq!(db.vertex_count(), 0);
        assert_eq!(db.edge_count(), 0);
        assert_eq!(db.graph_count(), 0);
    }

    #[test]
    fn add_vertex_assigns_fresh_ids() {
        let mut db = EpgmDatabase::new();
        let a = db.add_vertex("Person", props! { "name" => "Alice" });
        assert_eq!(a, 0);
        assert_eq!(db.vertex(a).unwrap().label, "Person");
        assert_eq!(db.vertex_count(), 1);
        let b = db.add_vertex("Tag", props! {});
        assert_ne!(a, b);
        assert!(db.vertex(b).unwrap().properties.is_empty());
        assert!(db.vertex(a).unwrap().graph_ids.is_empty());
    }

    #[test]
    fn add_edge_counts_per_source_index() {
        let mut db = EpgmDatabase::new();
        let v0 = db.add_vertex("Person", props! {});
        let v1 = db.add_vertex("Person", props! {});
        let e0 = db
            .add_edge(v0, v1, "knows", props! { "since" => 2014i64 })
            .unwrap();
        assert_eq!(db.edge(e0).unwrap().source_index, 0);
        // A second edge between the same endpoints is a parallel edge.
        let e1 = db.add_edge(v0, v1, "knows", props! {}).unwrap();
        assert_eq!(db.edge(e1).unwrap().source_index, 1);
        // Loops are fine.
        let e2 = db.add_edge(v0, v0, "knows", props! {}).unwrap();
        assert!(db.edge(e2).unwrap().is_loop());
        db.assert_consistent();
    }

    #[test]
    fn add_edge_rejects_dangling_endpoints() {
        let mut db = EpgmDatabase::new();
        let v0 = db.add_vertex("Person", props! {});
        let err = db.add_edge(v0, 99, "knows", props! {}).unwrap_err();
        assert!(matches!(err, ModelError::DanglingEndpoint { vertex: 99 }));
    }

    #[test]
    fn logical_graph_requires_closure() {
        let mut db = EpgmDatabase::new();
        let v0 = db.add_vertex("Person", props! {});
        let v1 = db.add_vertex("Person", props! {});
        let v2 = db.add_vertex("Person", props! {});
        let e0 = db.add_edge(v0, v1, "knows", props! {}).unwrap();
        let e1 = db.add_edge(v1, v2, "knows", props! {}).unwrap();

        // Edge e1 targets v2 which is not in the vertex set.
        let err = db
            .create_logical_graph("Community", props! {}, [v0, v1], [e0, e1])
            .unwrap_err();
        assert!(matches!(err, ModelError::ClosureViolation { edge } if edge == e1));

        let g = db
            .create_logical_graph("Community", props! {}, [v0, v1], [e0])
            .unwrap();
        assert!(db.vertex(v0).unwrap().graph_ids.contains(&g));
        assert!(db.edge(e0).unwrap().graph_ids.contains(&g));
        db.assert_consistent();
    }

    #[test]
    fn empty_logical_graph_is_legal() {
        let mut db = EpgmDatabase::new();
        let g = db
            .create_logical_graph("Community", props! {}, [], [])
            .unwrap();
        let graph = db.graph(g).unwrap();
        assert_eq!(graph.vertex_count(), 0);
        assert_eq!(graph.edge_count(), 0);
    }

    #[test]
    fn database_graph_spans_everything() {
        let mut db = EpgmDatabase::new();
        assert!(db.database_graph().is_empty());
        let v0 = db.add_vertex("Person", props! {});
        let dbg = db.database_graph();
        assert_eq!(dbg.vertex_count(), 1);
        assert_eq!(dbg.edge_count(), 0);
        assert!(dbg.contains_vertex(v0));
        // Not registered in the graph set.
        assert_eq!(db.graph_count(), 0);
    }

    #[test]
    fn property_read_write_round_trip() {
        let mut db = EpgmDatabase::new();
        let v0 = db.add_vertex("Person", props! { "name" => "Alice" });
        assert_eq!(
            db.get_vertex_property(v0, "name"),
            Some(&PropertyValue::Str("Alice".into()))
        );
        assert_eq!(db.get_vertex_property(v0, "missing"), None);
        db.set_vertex_property(v0, "age", 23i64).unwrap();
        assert_eq!(
            db.get_vertex_property(v0, "age"),
            Some(&PropertyValue::Int(23))
        );
    }
}
