//! Vertices and edges of the shared element spaces.

use std::collections::BTreeSet;

use crate::Properties;

/// Placeholder id carried by elements constructed outside any database, e.g.
/// replacement vertices built by projection functions. Operators adopt the
/// id of the element being replaced when they see it.
pub const DETACHED_ID: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: u64,
    /// Type label τ(v).
    pub label: String,
    pub properties: Properties,
    /// Ids of the logical graphs containing this vertex.
    pub graph_ids: BTreeSet<u64>,
}

impl Vertex {
    pub fn new(id: u64, label: impl Into<String>, properties: Properties) -> Self {
        Vertex {
            id,
            label: label.into(),
            properties,
            graph_ids: BTreeSet::new(),
        }
    }

    /// A vertex that does not belong to any database yet; see [`DETACHED_ID`].
    pub fn detached(label: impl Into<String>, properties: Properties) -> Self {
        Vertex::new(DETACHED_ID, label, properties)
    }

    pub fn is_detached(&self) -> bool {
        self.id == DETACHED_ID
    }
}

/// Directed edge. Loops (`source == target`) are permitted and parallel
/// edges are distinguished by `(source, source_index)`, which is unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: u64,
    pub source: u64,
    pub target: u64,
    /// Index unique at the source vertex; what tells parallel edges apart.
    pub source_index: u32,
    pub label: String,
    pub properties: Properties,
    pub graph_ids: BTreeSet<u64>,
}

impl Edge {
    pub fn new(
        id: u64,
        source: u64,
        target: u64,
        source_index: u32,
        label: impl Into<String>,
        properties: Properties,
    ) -> Self {
        Edge {
            id,
            source,
            target,
            source_index,
            label: label.into(),
            properties,
            graph_ids: BTreeSet::new(),
        }
    }

    pub fn detached(label: impl Into<String>, properties: Properties) -> Self {
        Edge::new(DETACHED_ID, DETACHED_ID, DETACHED_ID, 0, label, properties)
    }

    pub fn is_detached(&self) -> bool {
        self.id == DETACHED_ID
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}
