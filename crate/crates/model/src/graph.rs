//! Logical graphs and ordered graph collections.
//!
//! A [`LogicalGraph`] value is self-contained: besides its head (id, label,
//! properties) it carries the vertices and edges it spans. Element maps are
//! persistent ([`im::OrdMap`]), so cloning a graph is O(1) and binary
//! operators over large graphs share structure instead of copying it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use im::OrdMap;

use crate::{Edge, ModelError, Properties, Vertex};

/// First id handed out for operator results. Ids below this line are durable
/// (assigned by a database or store); ids at or above it are temporaries that
/// exist only until a graph is persisted.
pub const TEMP_ID_BASE: u64 = 1 << 63;

/// Reserved id of the derivable database graph over the full element spaces.
pub const DATABASE_GRAPH_ID: u64 = u64::MAX;

pub fn is_temporary(id: u64) -> bool {
    id >= TEMP_ID_BASE
}

/// Shared allocator for temporary graph-head ids. Every graph materialized
/// from a database carries a handle to that database's source, which is also
/// how binary operators detect cross-database inputs.
#[derive(Clone)]
pub struct IdSource {
    counter: Arc<AtomicU64>,
}

impl IdSource {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        IdSource {
            counter: Arc::new(AtomicU64::new(TEMP_ID_BASE)),
        }
    }

    pub fn fresh_id(&self) -> u64 {
        self.counter.fetch_add(1, Ordering::SeqCst)
    }

    pub fn same(&self, other: &IdSource) -> bool {
        Arc::ptr_eq(&self.counter, &other.counter)
    }
}

impl fmt::Debug for IdSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdSource({:p})", Arc::as_ptr(&self.counter))
    }
}

/// A named, attributed subset of the shared vertex and edge spaces.
///
/// Invariant: every edge's source and target are members of the vertex map
/// (subgraph closure). Constructors used by operators preserve it; external
/// inputs go through [`check_closure`](Self::check_closure).
#[derive(Clone)]
pub struct LogicalGraph {
    ids: IdSource,
    id: u64,
    label: String,
    properties: Properties,
    vertices: OrdMap<u64, Arc<Vertex>>,
    edges: OrdMap<u64, Arc<Edge>>,
}

impl LogicalGraph {
    /// Empty graph with an explicit head id.
    pub fn new(ids: &IdSource, id: u64, label: impl Into<String>, properties: Properties) -> Self {
        LogicalGraph {
            ids: ids.clone(),
            id,
            label: label.into(),
            properties,
            vertices: OrdMap::new(),
            edges: OrdMap::new(),
        }
    }

    /// Empty graph with a freshly allocated temporary head id.
    pub fn fresh(ids: &IdSource, label: impl Into<String>, properties: Properties) -> Self {
        let id = ids.fresh_id();
        LogicalGraph::new(ids, id, label, properties)
    }

    /// Assemble a graph from prebuilt element maps. The caller vouches for
    /// closure; [`check_closure`](Self::check_closure) is the explicit
    /// audit (a verification here would make cheap-clone set algebra
    /// quadratic).
    pub fn from_parts(
        ids: &IdSource,
        id: u64,
        label: impl Into<String>,
        properties: Properties,
        vertices: OrdMap<u64, Arc<Vertex>>,
        edges: OrdMap<u64, Arc<Edge>>,
    ) -> Self {
        LogicalGraph {
            ids: ids.clone(),
            id,
            label: label.into(),
            properties,
            vertices,
            edges,
        }
    }

    pub fn with_elements(
        ids: &IdSource,
        id: u64,
        label: impl Into<String>,
        properties: Properties,
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, ModelError> {
        let vertices: OrdMap<u64, Arc<Vertex>> =
            vertices.into_iter().map(|v| (v.id, Arc::new(v))).collect();
        let edges: OrdMap<u64, Arc<Edge>> =
            edges.into_iter().map(|e| (e.id, Arc::new(e))).collect();
        let graph = LogicalGraph {
            ids: ids.clone(),
            id,
            label: label.into(),
            properties,
            vertices,
            edges,
        };
        graph.check_closure()?;
        Ok(graph)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn is_temporary(&self) -> bool {
        is_temporary(self.id)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn properties(&self) -> &Properties {
        &self.properties
    }

    pub fn set_property(&mut self, key: impl Into<String>, value: impl Into<crate::PropertyValue>) {
        self.properties.set(key, value);
    }

    pub fn id_source(&self) -> &IdSource {
        &self.ids
    }

    pub fn same_source(&self, other: &LogicalGraph) -> bool {
        self.ids.same(&other.ids)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex(&self, id: u64) -> Option<&Arc<Vertex>> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: u64) -> Option<&Arc<Edge>> {
        self.edges.get(&id)
    }

    pub fn contains_vertex(&self, id: u64) -> bool {
        self.vertices.contains_key(&id)
    }

    pub fn contains_edge(&self, id: u64) -> bool {
        self.edges.contains_key(&id)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Arc<Vertex>> {
        self.vertices.values()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = &Arc<Edge>> {
        self.edges.values()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.vertices.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.edges.keys().copied()
    }

    pub fn vertex_id_set(&self) -> BTreeSet<u64> {
        self.vertex_ids().collect()
    }

    pub fn edge_id_set(&self) -> BTreeSet<u64> {
        self.edge_ids().collect()
    }

    /// Raw element maps, for operators that build results by set algebra.
    pub fn vertex_map(&self) -> &OrdMap<u64, Arc<Vertex>> {
        &self.vertices
    }

    pub fn edge_map(&self) -> &OrdMap<u64, Arc<Edge>> {
        &self.edges
    }

    pub fn insert_vertex(&mut self, vertex: Vertex) {
        self.vertices.insert(vertex.id, Arc::new(vertex));
    }

    /// Insert an edge; both endpoints must already be members.
    pub fn insert_edge(&mut self, edge: Edge) -> Result<(), ModelError> {
        if !self.vertices.contains_key(&edge.source) || !self.vertices.contains_key(&edge.target) {
            return Err(ModelError::ClosureViolation { edge: edge.id });
        }
        self.edges.insert(edge.id, Arc::new(edge));
        Ok(())
    }

    pub fn check_closure(&self) -> Result<(), ModelError> {
        for edge in self.edges.values() {
            if !self.vertices.contains_key(&edge.source)
                || !self.vertices.contains_key(&edge.target)
            {
                return Err(ModelError::ClosureViolation { edge: edge.id });
            }
        }
        Ok(())
    }
}

/// Head id, label, properties and element ids participate in equality; the
/// id source handle does not.
impl PartialEq for LogicalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.label == other.label
            && self.properties == other.properties
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl fmt::Debug for LogicalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogicalGraph")
            .field("id", &self.id)
            .field("label", &self.label)
            .field("properties", &self.properties)
            .field("vertices", &self.vertex_id_set())
            .field("edges", &self.edge_id_set())
            .finish()
    }
}

/// Ordered sequence of logical graphs. Order is significant and preserved by
/// order-agnostic operators; duplicates by id are allowed until `distinct`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphCollection(Vec<LogicalGraph>);

impl GraphCollection {
    pub fn new() -> Self {
        GraphCollection(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&LogicalGraph> {
        self.0.get(index)
    }

    pub fn first(&self) -> Option<&LogicalGraph> {
        self.0.first()
    }

    pub fn push(&mut self, graph: LogicalGraph) {
        self.0.push(graph);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LogicalGraph> {
        self.0.iter()
    }

    /// Head ids in collection order.
    pub fn ids(&self) -> Vec<u64> {
        self.0.iter().map(|g| g.id()).collect()
    }
}

impl From<Vec<LogicalGraph>> for GraphCollection {
    fn from(graphs: Vec<LogicalGraph>) -> Self {
        GraphCollection(graphs)
    }
}

impl FromIterator<LogicalGraph> for GraphCollection {
    fn from_iter<T: IntoIterator<Item = LogicalGraph>>(iter: T) -> Self {
        GraphCollection(iter.into_iter().collect())
    }
}

impl IntoIterator for GraphCollection {
    type Item = LogicalGraph;
    type IntoIter = std::vec::IntoIter<LogicalGraph>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a GraphCollection {
    type Item = &'a LogicalGraph;
    type IntoIter = std::slice::Iter<'a, LogicalGraph>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
