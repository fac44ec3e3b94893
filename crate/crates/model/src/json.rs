//! JSON dataset format: top-level arrays `vertices`, `edges` and `graphs`,
//! plus an optional `labels` array declaring dictionary registration order
//! for stores that encode labels as ids.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Edge, EpgmDatabase, LogicalGraph, ModelError, Properties, PropertyValue, Vertex};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u64,
    pub label: String,
    #[serde(default)]
    pub properties: BTreeMap<String, PropertyValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: u64,
    pub source: u64,
    pub target: u64,
    /// Per-source index; assigned in file order when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    pub label: String,
    #[serde(default)]
    pub properties: BTreeMap<String, PropertyValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub id: u64,
    pub label: String,
    #[serde(default)]
    pub properties: BTreeMap<String, PropertyValue>,
    #[serde(default)]
    pub vertices: Vec<u64>,
    #[serde(default)]
    pub edges: Vec<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DatasetJson {
    /// Optional label registration order for dictionary-encoding stores.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub graphs: Vec<GraphJson>,
}

fn to_properties(map: BTreeMap<String, PropertyValue>) -> Properties {
    map.into_iter().collect()
}

fn from_properties(props: &Properties) -> BTreeMap<String, PropertyValue> {
    props.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

impl DatasetJson {
    /// Build a database from the dataset. Edge indexes default to per-source
    /// file order; graph membership comes from the graph entries.
    pub fn into_database(self) -> Result<EpgmDatabase, ModelError> {
        let mut db = EpgmDatabase::new();
        for v in self.vertices {
            db.insert_vertex(Vertex::new(v.id, v.label, to_properties(v.properties)))?;
        }
        let mut next_index: BTreeMap<u64, u32> = BTreeMap::new();
        for e in self.edges {
            let index = match e.index {
                Some(idx) => idx,
                None => {
                    let slot = next_index.entry(e.source).or_insert(0);
                    let idx = *slot;
                    *slot += 1;
                    idx
                }
            };
            db.insert_edge(Edge::new(
                e.id,
                e.source,
                e.target,
                index,
                e.label,
                to_properties(e.properties),
            ))?;
        }
        for g in self.graphs {
            db.insert_graph(
                g.id,
                g.label,
                to_properties(g.properties),
                g.vertices,
                g.edges,
            )?;
        }
        Ok(db)
    }

    /// Snapshot a whole database in dataset form.
    pub fn from_database(db: &EpgmDatabase, labels: &[&str]) -> Self {
        DatasetJson {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            vertices: db
                .vertices()
                .map(|v| VertexJson {
                    id: v.id,
                    label: v.label.clone(),
                    properties: from_properties(&v.properties),
                })
                .collect(),
            edges: db
                .edges()
                .map(|e| EdgeJson {
                    id: e.id,
                    source: e.source,
                    target: e.target,
                    index: Some(e.source_index),
                    label: e.label.clone(),
                    properties: from_properties(&e.properties),
                })
                .collect(),
            graphs: db
                .graph_entries()
                .map(|g| GraphJson {
                    id: g.id,
                    label: g.label.clone(),
                    properties: from_properties(&g.properties),
                    vertices: g.vertex_ids.iter().copied().collect(),
                    edges: g.edge_ids.iter().copied().collect(),
                })
                .collect(),
        }
    }

    /// Snapshot of a single self-contained graph, re-importable as a dataset.
    pub fn from_graph(graph: &LogicalGraph) -> Self {
        Self::from_graphs(std::slice::from_ref(graph))
    }

    /// Snapshot of several graphs sharing element spaces. Elements are
    /// emitted once even when contained in more than one graph.
    pub fn from_graphs(graphs: &[LogicalGraph]) -> Self {
        let mut vertices: BTreeMap<u64, VertexJson> = BTreeMap::new();
        let mut edges: BTreeMap<u64, EdgeJson> = BTreeMap::new();
        let mut graph_entries = Vec::new();
        for graph in graphs {
            for v in graph.vertices() {
                vertices.entry(v.id).or_insert_with(|| VertexJson {
                    id: v.id,
                    label: v.label.clone(),
                    properties: from_properties(&v.properties),
                });
            }
            for e in graph.edges() {
                edges.entry(e.id).or_insert_with(|| EdgeJson {
                    id: e.id,
                    source: e.source,
                    target: e.target,
                    index: Some(e.source_index),
                    label: e.label.clone(),
                    properties: from_properties(&e.properties),
                });
            }
            graph_entries.push(GraphJson {
                id: graph.id(),
                label: graph.label().to_string(),
                properties: from_properties(graph.properties()),
                vertices: graph.vertex_ids().collect(),
                edges: graph.edge_ids().collect(),
            });
        }
        DatasetJson {
            labels: Vec::new(),
            vertices: vertices.into_values().collect(),
            edges: edges.into_values().collect(),
            graphs: graph_entries,
        }
    }

    pub fn to_pretty_string(&self) -> Result<String, ModelError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn parse_dataset(text: &str) -> Result<DatasetJson, ModelError> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<DatasetJson, ModelError> {
    let text = std::fs::read_to_string(path)?;
    parse_dataset(&text)
}

pub fn write_dataset(path: impl AsRef<Path>, dataset: &DatasetJson) -> Result<(), ModelError> {
    let mut text = dataset.to_pretty_string()?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
