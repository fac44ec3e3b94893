//! The graph store: a vertex table and a graph table of versioned cells
//! over an in-memory sorted table, an append-only journal and immutable
//! sorted segments. Single writer, snapshot readers.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound;
use std::path::PathBuf;

use epgm_model::{Edge, EpgmDatabase, IdSource, LogicalGraph, Properties, Vertex};
use serde::{Deserialize, Serialize};

use crate::cell::{CellKey, CellRecord};
use crate::codec::{self, Family};
use crate::dictionary::LabelDictionary;
use crate::journal::{self, Journal, SyncMode};
use crate::partition::{PartitionStrategy, Partitioner};
use crate::row_codec;
use crate::segment::{load_segment, write_segment, Segment};
use crate::StoreError;

pub const LATEST: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct StoreConfig {
    pub path: PathBuf,
    pub partition_count: u16,
    pub strategy: PartitionStrategy,
    /// Cell versions retained per (row, family, qualifier).
    pub max_versions: u32,
    pub sync: SyncMode,
}

impl StoreConfig {
    pub fn hash(path: impl Into<PathBuf>, partition_count: u16) -> StoreConfig {
        StoreConfig {
            path: path.into(),
            partition_count,
            strategy: PartitionStrategy::Hash,
            max_versions: 3,
            sync: SyncMode::Batched,
        }
    }

    pub fn range(path: impl Into<PathBuf>, boundaries: Vec<u64>) -> StoreConfig {
        let partition_count = boundaries.len() as u16;
        StoreConfig {
            path: path.into(),
            partition_count,
            strategy: PartitionStrategy::Range { boundaries },
            max_versions: 3,
            sync: SyncMode::Batched,
        }
    }

    pub fn with_max_versions(mut self, max_versions: u32) -> StoreConfig {
        self.max_versions = max_versions;
        self
    }

    pub fn with_sync(mut self, sync: SyncMode) -> StoreConfig {
        self.sync = sync;
        self
    }
}

/// Persisted store metadata: configuration, the label dictionary and the
/// graph id allocation state.
#[derive(Debug, Serialize, Deserialize)]
struct MetaFile {
    version: u32,
    partition_count: u16,
    strategy: PartitionStrategy,
    max_versions: u32,
    labels: Vec<String>,
    next_graph_id: u64,
}

/// An edge as the store knows it: identified by `(source, index)`; edge ids
/// live only in memory and are reassigned on load.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredEdge {
    pub source: u64,
    pub target: u64,
    pub index: u32,
    pub label: String,
    pub properties: Properties,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub vertex: Vertex,
    pub out_edges: Vec<StoredEdge>,
    pub in_edges: Vec<StoredEdge>,
}

/// Reference to a member edge of a stored graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRef {
    pub source: u64,
    pub index: u32,
    pub target: u64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphRecord {
    pub id: u64,
    pub label: String,
    pub properties: Properties,
    pub vertex_ids: Vec<u64>,
    pub edges: Vec<EdgeRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoreStats {
    pub vertices: usize,
    pub edges: usize,
    pub graphs: usize,
    pub per_partition: BTreeMap<u16, usize>,
    pub label_histogram: BTreeMap<String, usize>,
}

pub struct GraphStore {
    config: StoreConfig,
    dict: LabelDictionary,
    partitioner: Partitioner,
    memtable: BTreeMap<CellKey, Option<Vec<u8>>>,
    journal: Journal,
    /// Oldest first; the memtable is newer than all of them.
    segments: Vec<Segment>,
    clock: u64,
    next_graph_id: u64,
    next_segment_seq: u64,
}

impl std::fmt::Debug for GraphStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphStore")
            .field("path", &self.config.path)
            .field("memtable_cells", &self.memtable.len())
            .field("segments", &self.segments.len())
            .field("clock", &self.clock)
            .finish()
    }
}

impl GraphStore {
    /// Open (or create) a store. Replays the journal into the memtable and
    /// loads region metadata; a configuration differing from the one the
    /// store was created with is an error.
    pub fn open(config: StoreConfig) -> Result<GraphStore, StoreError> {
        std::fs::create_dir_all(config.path.join("segments"))?;
        let meta_path = config.path.join("meta");

        let (dict, next_graph_id) = if meta_path.exists() {
            let text = std::fs::read_to_string(&meta_path)?;
            let meta: MetaFile = serde_json::from_str(&text)?;
            if meta.partition_count != config.partition_count {
                return Err(StoreError::ConfigMismatch {
                    field: "partition-count",
                });
            }
            if meta.strategy != config.strategy {
                return Err(StoreError::ConfigMismatch {
                    field: "partitioner strategy",
                });
            }
            if meta.max_versions != config.max_versions {
                return Err(StoreError::ConfigMismatch {
                    field: "max-versions",
                });
            }
            (
                LabelDictionary::from_labels(meta.labels),
                meta.next_graph_id,
            )
        } else {
            (LabelDictionary::new(), 0)
        };

        let partitioner = Partitioner::new(config.strategy.clone(), config.partition_count)
            .map_err(StoreError::BadConfig)?;

        // Load segment files in sequence order.
        let mut segment_paths: Vec<PathBuf> = std::fs::read_dir(config.path.join("segments"))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "seg"))
            .collect();
        segment_paths.sort();
        let mut segments = Vec::with_capacity(segment_paths.len());
        for path in &segment_paths {
            segments.push(load_segment(path)?);
        }
        let next_segment_seq = segment_paths
            .last()
            .and_then(|p| p.file_stem()?.to_str()?.parse::<u64>().ok())
            .map_or(0, |seq| seq + 1);

        // Replay the journal on top.
        let mut memtable = BTreeMap::new();
        for record in journal::replay(&config.path.join("journal.log"))? {
            memtable.insert(record.key, record.value);
        }

        let clock = memtable
            .keys()
            .map(CellKey::ts)
            .chain(
                segments
                    .iter()
                    .flat_map(|s| s.cells.keys().map(CellKey::ts)),
            )
            .max()
            .unwrap_or(0);

        let journal = Journal::open(config.path.join("journal.log"), config.sync)?;
        let store = GraphStore {
            config,
            dict,
            partitioner,
            memtable,
            journal,
            segments,
            clock,
            next_graph_id,
            next_segment_seq,
        };
        if !meta_path.exists() {
            store.rewrite_meta()?;
        }
        Ok(store)
    }

    /// Open a store that must already exist, taking every configuration
    /// field from its meta file.
    pub fn open_existing(path: impl Into<PathBuf>) -> Result<GraphStore, StoreError> {
        let path = path.into();
        let meta_path = path.join("meta");
        if !meta_path.exists() {
            return Err(StoreError::BadConfig(format!(
                "{} is not a graph store (no meta file)",
                path.display()
            )));
        }
        let text = std::fs::read_to_string(&meta_path)?;
        let meta: MetaFile = serde_json::from_str(&text)?;
        GraphStore::open(StoreConfig {
            path,
            partition_count: meta.partition_count,
            strategy: meta.strategy,
            max_versions: meta.max_versions,
            sync: SyncMode::Batched,
        })
    }

    pub fn partitioner(&self) -> &Partitioner {
        &self.partitioner
    }

    pub fn dictionary(&self) -> &LabelDictionary {
        &self.dict
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    /// Pre-register labels so dictionary ids follow a dataset's declared
    /// order rather than write order.
    pub fn seed_labels(&mut self, labels: &[impl AsRef<str>]) -> Result<(), StoreError> {
        let before = self.dict.len();
        for label in labels {
            self.dict.intern(label.as_ref());
        }
        if self.dict.len() != before {
            self.rewrite_meta()?;
        }
        Ok(())
    }

    fn rewrite_meta(&self) -> Result<(), StoreError> {
        let meta = MetaFile {
            version: 1,
            partition_count: self.config.partition_count,
            strategy: self.config.strategy.clone(),
            max_versions: self.config.max_versions,
            labels: self.dict.labels().to_vec(),
            next_graph_id: self.next_graph_id,
        };
        let tmp = self.config.path.join("meta.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&meta)?)?;
        std::fs::rename(&tmp, self.config.path.join("meta"))?;
        Ok(())
    }

    fn intern_label(&mut self, label: &str) -> Result<u16, StoreError> {
        if let Some(id) = self.dict.id_of(label) {
            return Ok(id);
        }
        let id = self.dict.intern(label);
        // Persist the dictionary before any cell referencing the id hits
        // the journal, so replay never sees an unknown label.
        self.rewrite_meta()?;
        Ok(id)
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    fn write_cell(
        &mut self,
        family: Family,
        row: Vec<u8>,
        qualifier: Vec<u8>,
        ts: u64,
        value: Option<Vec<u8>>,
    ) -> Result<(), StoreError> {
        let key = CellKey::new(family, row, qualifier, ts);
        self.journal.append(&CellRecord {
            key: key.clone(),
            value: value.clone(),
        })?;
        self.memtable.insert(key, value);
        self.clock = self.clock.max(ts);
        Ok(())
    }

    // ------------------------------------------------------------------
    // Versioned reads

    /// Newest-first retained versions of one cell.
    fn versions(
        &self,
        family: Family,
        row: &[u8],
        qualifier: &[u8],
    ) -> Vec<(u64, Option<Vec<u8>>)> {
        let start = CellKey::new(family, row.to_vec(), qualifier.to_vec(), u64::MAX);
        let end = CellKey::new(family, row.to_vec(), qualifier.to_vec(), 0);
        let mut seen: BTreeMap<u64, Option<Vec<u8>>> = BTreeMap::new();
        for (key, value) in self.memtable.range(start.clone()..=end.clone()) {
            seen.entry(key.ts()).or_insert_with(|| value.clone());
        }
        for segment in self.segments.iter().rev() {
            for (key, value) in segment.cells.range(start.clone()..=end.clone()) {
                seen.entry(key.ts()).or_insert_with(|| value.clone());
            }
        }
        seen.into_iter()
            .rev()
            .take(self.config.max_versions as usize)
            .collect()
    }

    /// Value of the newest retained version at or before `as_of`;
    /// tombstones read as absent.
    fn read_cell(
        &self,
        family: Family,
        row: &[u8],
        qualifier: &[u8],
        as_of: u64,
    ) -> Option<Vec<u8>> {
        for (ts, value) in self.versions(family, row, qualifier) {
            if ts <= as_of {
                return value;
            }
        }
        None
    }

    /// All qualifiers that ever appeared in a row's family.
    fn row_qualifiers(&self, family: Family, row: &[u8]) -> BTreeSet<Vec<u8>> {
        let start = CellKey {
            family: family as u8,
            row: row.to_vec(),
            qualifier: Vec::new(),
            ts_rev: 0,
        };
        let mut out = BTreeSet::new();
        let in_row = |key: &CellKey| key.family == family as u8 && key.row == row;
        for (key, _) in self.memtable.range(start.clone()..) {
            if !in_row(key) {
                break;
            }
            out.insert(key.qualifier.clone());
        }
        for segment in &self.segments {
            for (key, _) in segment.cells.range(start.clone()..) {
                if !in_row(key) {
                    break;
                }
                out.insert(key.qualifier.clone());
            }
        }
        out
    }

    /// Live cells of a row family at `as_of`.
    fn live_row_cells(&self, family: Family, row: &[u8], as_of: u64) -> BTreeMap<Vec<u8>, Vec<u8>> {
        self.row_qualifiers(family, row)
            .into_iter()
            .filter_map(|q| self.read_cell(family, row, &q, as_of).map(|v| (q, v)))
            .collect()
    }

    /// Row keys present in a family range, optionally narrowed to one
    /// partition's key range (vertex families only).
    fn collect_rows(&self, families: &[Family], partition: Option<u16>) -> BTreeSet<Vec<u8>> {
        let mut rows = BTreeSet::new();
        for &family in families {
            let (row_lo, row_hi) = match partition {
                Some(p) => {
                    let mut lo = vec![0u8; codec::VERTEX_ROW_KEY_LEN];
                    lo[0..2].copy_from_slice(&p.to_be_bytes());
                    let mut hi = vec![0u8; codec::VERTEX_ROW_KEY_LEN];
                    hi[0..2].copy_from_slice(&p.to_be_bytes());
                    hi[2..10].copy_from_slice(&u64::MAX.to_be_bytes());
                    (lo, Some(hi))
                }
                None => (Vec::new(), None),
            };
            let start = Bound::Included(CellKey {
                family: family as u8,
                row: row_lo,
                qualifier: Vec::new(),
                ts_rev: 0,
            });
            let end = match &row_hi {
                Some(hi) => Bound::Included(CellKey {
                    family: family as u8,
                    row: hi.clone(),
                    qualifier: vec![0xFF; 64],
                    ts_rev: u64::MAX,
                }),
                None => Bound::Excluded(CellKey {
                    family: family as u8 + 1,
                    row: Vec::new(),
                    qualifier: Vec::new(),
                    ts_rev: 0,
                }),
            };
            for (key, _) in self.memtable.range((start.clone(), end.clone())) {
                rows.insert(key.row.clone());
            }
            for segment in &self.segments {
                for (key, _) in segment.cells.range((start.clone(), end.clone())) {
                    rows.insert(key.row.clone());
                }
            }
        }
        rows
    }

    // ------------------------------------------------------------------
    // Vertex table

    /// Write a vertex row: meta (type, graphs, next edge index), one
    /// property column per key, and the outgoing edges — each of which is
    /// mirrored into its target row's in-edges family with the same
    /// qualifier bytes modulo the swapped opposite vertex.
    pub fn put_vertex(&mut self, vertex: &Vertex, out_edges: &[Edge]) -> Result<(), StoreError> {
        let ts = self.tick();
        self.put_vertex_at(vertex, out_edges, ts)
    }

    pub fn put_vertex_at(
        &mut self,
        vertex: &Vertex,
        out_edges: &[Edge],
        ts: u64,
    ) -> Result<(), StoreError> {
        let labels_before = self.dict.len();
        let (row, cells) =
            row_codec::encode_vertex_row(vertex, out_edges, &self.partitioner, &mut self.dict)?;
        if self.dict.len() != labels_before {
            // Persist new dictionary entries before journaling cells that
            // reference them.
            self.rewrite_meta()?;
        }

        // Columns live before this write but absent from the encoded row
        // die under a tombstone; removed out-edges also kill their mirror.
        let mut new_cells: BTreeSet<(Family, Vec<u8>)> = BTreeSet::new();
        for cell in &cells {
            new_cells.insert((cell.family, cell.qualifier.clone()));
        }
        for family in [
            Family::VertexMeta,
            Family::VertexProperties,
            Family::VertexOutEdges,
        ] {
            for old_qual in self.live_row_cells(family, &row, LATEST).into_keys() {
                if new_cells.contains(&(family, old_qual.clone())) {
                    continue;
                }
                if family == Family::VertexOutEdges {
                    let (type_id, partition, opposite, index) =
                        codec::decode_edge_qualifier(Family::VertexOutEdges, &old_qual)?;
                    let target_row = codec::vertex_row_key(partition, opposite);
                    let mirror = codec::edge_qualifier(type_id, &row, index);
                    self.write_cell(Family::VertexInEdges, target_row, mirror, ts, None)?;
                }
                self.write_cell(family, row.clone(), old_qual, ts, None)?;
            }
        }

        for cell in cells {
            if cell.family == Family::VertexOutEdges {
                // Mirror into the target row with the opposite swapped.
                let (type_id, partition, opposite, index) =
                    codec::decode_edge_qualifier(Family::VertexOutEdges, &cell.qualifier)?;
                let target_row = codec::vertex_row_key(partition, opposite);
                let mirror = codec::edge_qualifier(type_id, &row, index);
                self.write_cell(
                    Family::VertexInEdges,
                    target_row,
                    mirror,
                    ts,
                    Some(cell.value.clone()),
                )?;
            }
            self.write_cell(
                cell.family,
                row.clone(),
                cell.qualifier,
                ts,
                Some(cell.value),
            )?;
        }
        Ok(())
    }

    fn row_of(&self, vertex_id: u64) -> Vec<u8> {
        codec::vertex_row_key(self.partitioner.assign(vertex_id), vertex_id)
    }

    /// Read a vertex with its incident edges at `as_of` (default newest).
    pub fn get_vertex(
        &self,
        vertex_id: u64,
        as_of: Option<u64>,
    ) -> Result<Option<VertexRecord>, StoreError> {
        let as_of = as_of.unwrap_or(LATEST);
        let row = self.row_of(vertex_id);
        self.decode_vertex_row(&row, as_of)
    }

    fn decode_vertex_row(
        &self,
        row: &[u8],
        as_of: u64,
    ) -> Result<Option<VertexRecord>, StoreError> {
        if self
            .read_cell(Family::VertexMeta, row, codec::META_TYPE, as_of)
            .is_none()
        {
            return Ok(None);
        }
        let (_, vertex_id) = codec::decode_vertex_row_key(row)?;

        // The row's own cells decode through the pure row codec; incoming
        // edges are mirrors owned by other rows and assemble separately.
        let mut cells = Vec::new();
        for family in [
            Family::VertexMeta,
            Family::VertexProperties,
            Family::VertexOutEdges,
        ] {
            for (qualifier, value) in self.live_row_cells(family, row, as_of) {
                cells.push(row_codec::RowCell {
                    family,
                    qualifier,
                    value,
                });
            }
        }
        let (vertex, out_edges) = row_codec::decode_vertex_row(row, &cells, &self.dict)?;

        let mut in_edges = Vec::new();
        for (qualifier, value) in self.live_row_cells(Family::VertexInEdges, row, as_of) {
            let (type_id, _, source, index) =
                codec::decode_edge_qualifier(Family::VertexInEdges, &qualifier)?;
            in_edges.push(StoredEdge {
                source,
                target: vertex_id,
                index,
                label: self.dict.label_of(type_id)?.to_string(),
                properties: codec::decode_edge_properties(Family::VertexInEdges, &value)?,
            });
        }
        in_edges.sort_by_key(|e| (e.source, e.index));

        Ok(Some(VertexRecord {
            vertex,
            out_edges,
            in_edges,
        }))
    }

    /// Vertices in row-key order, whole store or one partition's key range.
    pub fn scan_vertices(
        &self,
        partition: Option<u16>,
        as_of: Option<u64>,
    ) -> Result<Vec<VertexRecord>, StoreError> {
        let as_of = as_of.unwrap_or(LATEST);
        let families = [
            Family::VertexMeta,
            Family::VertexProperties,
            Family::VertexOutEdges,
            Family::VertexInEdges,
        ];
        let mut records = Vec::new();
        for row in self.collect_rows(&families, partition) {
            if let Some(record) = self.decode_vertex_row(&row, as_of)? {
                records.push(record);
            }
        }
        Ok(records)
    }

    // ------------------------------------------------------------------
    // Graph table

    /// Write a logical graph row under its own id: meta (type, versioned
    /// vertex list), properties, and one edge column per member vertex
    /// listing only the outgoing member edges belonging to this graph.
    pub fn put_graph(&mut self, graph: &LogicalGraph) -> Result<(), StoreError> {
        let ts = self.tick();
        self.put_graph_at(graph, ts)
    }

    pub fn put_graph_at(&mut self, graph: &LogicalGraph, ts: u64) -> Result<(), StoreError> {
        self.write_graph_row(graph.id(), graph.label(), graph.properties(), graph, ts)?;
        self.next_graph_id = self.next_graph_id.max(graph.id() + 1);
        self.rewrite_meta()?;
        Ok(())
    }

    fn write_graph_row(
        &mut self,
        graph_id: u64,
        label: &str,
        properties: &Properties,
        graph: &LogicalGraph,
        ts: u64,
    ) -> Result<(), StoreError> {
        // Member vertices must exist in the vertex table.
        for vid in graph.vertex_ids() {
            let row = self.row_of(vid);
            if self
                .read_cell(Family::VertexMeta, &row, codec::META_TYPE, LATEST)
                .is_none()
            {
                return Err(StoreError::DanglingElement { vertex: vid });
            }
        }

        let row = codec::graph_row_key(graph_id);
        let type_id = self.intern_label(label)?;
        self.write_cell(
            Family::GraphMeta,
            row.clone(),
            codec::META_TYPE.to_vec(),
            ts,
            Some(codec::encode_u16(type_id)),
        )?;
        let member_rows: Vec<Vec<u8>> = graph.vertex_ids().map(|vid| self.row_of(vid)).collect();
        let mut sorted_rows = member_rows.clone();
        sorted_rows.sort();
        self.write_cell(
            Family::GraphMeta,
            row.clone(),
            codec::META_VERTICES.to_vec(),
            ts,
            Some(codec::encode_row_key_list(&sorted_rows)),
        )?;

        let old_props = self.live_row_cells(Family::GraphProperties, &row, LATEST);
        for (key, value) in properties.iter() {
            self.write_cell(
                Family::GraphProperties,
                row.clone(),
                key.as_bytes().to_vec(),
                ts,
                Some(codec::encode_property_cell(value)),
            )?;
        }
        for old_key in old_props.keys() {
            if !properties.contains_key(std::str::from_utf8(old_key).unwrap_or("")) {
                self.write_cell(
                    Family::GraphProperties,
                    row.clone(),
                    old_key.clone(),
                    ts,
                    None,
                )?;
            }
        }

        // Edge columns: member outgoing edges, grouped per source vertex.
        let mut per_vertex: BTreeMap<Vec<u8>, Vec<(u32, Vec<u8>)>> = BTreeMap::new();
        for edge in graph.edges() {
            let type_id = self.intern_label(&edge.label.clone())?;
            let source_row = self.row_of(edge.source);
            let target_row = self.row_of(edge.target);
            let qualifier = codec::edge_qualifier(type_id, &target_row, edge.source_index);
            per_vertex
                .entry(source_row)
                .or_default()
                .push((edge.source_index, qualifier));
        }
        let old_columns = self.live_row_cells(Family::GraphEdges, &row, LATEST);
        for (vertex_row, qualifiers) in &mut per_vertex {
            qualifiers.sort();
            let list: Vec<Vec<u8>> = qualifiers.iter().map(|(_, q)| q.clone()).collect();
            self.write_cell(
                Family::GraphEdges,
                row.clone(),
                vertex_row.clone(),
                ts,
                Some(codec::encode_qualifier_list(&list)),
            )?;
        }
        for old_column in old_columns.keys() {
            if !per_vertex.contains_key(old_column) {
                self.write_cell(
                    Family::GraphEdges,
                    row.clone(),
                    old_column.clone(),
                    ts,
                    None,
                )?;
            }
        }
        Ok(())
    }

    pub fn get_graph(
        &self,
        graph_id: u64,
        as_of: Option<u64>,
    ) -> Result<Option<GraphRecord>, StoreError> {
        let as_of = as_of.unwrap_or(LATEST);
        let row = codec::graph_row_key(graph_id);
        let Some(type_cell) = self.read_cell(Family::GraphMeta, &row, codec::META_TYPE, as_of)
        else {
            return Ok(None);
        };
        let type_id = codec::decode_u16(Family::GraphMeta, &type_cell)?;
        let label = self.dict.label_of(type_id)?.to_string();

        let vertex_ids: Vec<u64> =
            match self.read_cell(Family::GraphMeta, &row, codec::META_VERTICES, as_of) {
                Some(cell) => codec::decode_row_key_list(Family::GraphMeta, &cell)?
                    .iter()
                    .map(|key| codec::decode_vertex_row_key(key).map(|(_, id)| id))
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };

        let mut properties = Properties::new();
        for (key, value) in self.live_row_cells(Family::GraphProperties, &row, as_of) {
            let key = String::from_utf8(key).map_err(|_| {
                StoreError::corrupt_cell(Family::GraphProperties, "column", "key is not utf-8")
            })?;
            properties.set(
                key,
                codec::decode_property_cell(Family::GraphProperties, &value)?,
            );
        }

        let mut edges = Vec::new();
        for (column, value) in self.live_row_cells(Family::GraphEdges, &row, as_of) {
            let (_, source) = codec::decode_vertex_row_key(&column)?;
            for qualifier in codec::decode_qualifier_list(Family::GraphEdges, &value)? {
                let (type_id, _, target, index) =
                    codec::decode_edge_qualifier(Family::GraphEdges, &qualifier)?;
                edges.push(EdgeRef {
                    source,
                    index,
                    target,
                    label: self.dict.label_of(type_id)?.to_string(),
                });
            }
        }
        edges.sort();

        Ok(Some(GraphRecord {
            id: graph_id,
            label,
            properties,
            vertex_ids,
            edges,
        }))
    }

    /// Materialize a stored graph as a self-contained value, reading member
    /// vertices and edge properties at the same snapshot. Edge ids are
    /// ordinals local to this load; the persistent edge identity is
    /// `(source, index)`.
    pub fn load_graph(
        &self,
        graph_id: u64,
        as_of: Option<u64>,
        ids: &IdSource,
    ) -> Result<Option<LogicalGraph>, StoreError> {
        let Some(record) = self.get_graph(graph_id, as_of)? else {
            return Ok(None);
        };
        let mut vertices = Vec::new();
        let mut out_by_vertex: BTreeMap<u64, Vec<StoredEdge>> = BTreeMap::new();
        for &vid in &record.vertex_ids {
            let vertex_record = self
                .get_vertex(vid, as_of)?
                .ok_or(StoreError::DanglingElement { vertex: vid })?;
            vertices.push(vertex_record.vertex);
            out_by_vertex.insert(vid, vertex_record.out_edges);
        }
        let mut edges = Vec::new();
        for (ordinal, edge_ref) in record.edges.iter().enumerate() {
            let stored = out_by_vertex
                .get(&edge_ref.source)
                .and_then(|outs| {
                    outs.iter()
                        .find(|e| e.index == edge_ref.index && e.target == edge_ref.target)
                })
                .ok_or(StoreError::MissingMemberEdge {
                    graph: graph_id,
                    edge_source: edge_ref.source,
                    index: edge_ref.index,
                })?;
            let mut edge = Edge::new(
                ordinal as u64,
                stored.source,
                stored.target,
                stored.index,
                stored.label.clone(),
                stored.properties.clone(),
            );
            edge.graph_ids.insert(graph_id);
            edges.push(edge);
        }
        Ok(Some(
            LogicalGraph::with_elements(
                ids,
                graph_id,
                record.label,
                record.properties,
                vertices,
                edges,
            )
            .map_err(StoreError::Model)?,
        ))
    }

    /// Durably register a temporary graph: it gets the next graph id, its
    /// row is written, and every member vertex's graphs column is updated.
    pub fn persist_graph(&mut self, graph: &LogicalGraph) -> Result<u64, StoreError> {
        let id = self.next_graph_id;
        let ts = self.tick();
        self.write_graph_row(id, graph.label(), graph.properties(), graph, ts)?;
        self.next_graph_id += 1;
        self.rewrite_meta()?;

        for vid in graph.vertex_ids() {
            let row = self.row_of(vid);
            let mut graphs: BTreeSet<u64> =
                match self.read_cell(Family::VertexMeta, &row, codec::META_GRAPHS, LATEST) {
                    Some(cell) => codec::decode_u64_list(Family::VertexMeta, &cell)?
                        .into_iter()
                        .collect(),
                    None => BTreeSet::new(),
                };
            graphs.insert(id);
            self.write_cell(
                Family::VertexMeta,
                row,
                codec::META_GRAPHS.to_vec(),
                ts,
                Some(codec::encode_u64_list(graphs)),
            )?;
        }
        Ok(id)
    }

    /// Graph ids present in the graph table (newest view), ascending.
    pub fn graph_ids(&self) -> Result<Vec<u64>, StoreError> {
        let rows = self.collect_rows(
            &[
                Family::GraphMeta,
                Family::GraphProperties,
                Family::GraphEdges,
            ],
            None,
        );
        let mut ids = Vec::new();
        for row in rows {
            let id = codec::decode_graph_row_key(&row)?;
            if self
                .read_cell(Family::GraphMeta, &row, codec::META_TYPE, LATEST)
                .is_some()
            {
                ids.push(id);
            }
        }
        Ok(ids)
    }

    /// Bulk-write a whole database: every vertex row with its outgoing
    /// edges, then every logical graph row.
    pub fn put_database(&mut self, db: &EpgmDatabase) -> Result<(), StoreError> {
        for vertex in db.vertices() {
            let out_edges: Vec<Edge> = db.out_edges(vertex.id).into_iter().cloned().collect();
            self.put_vertex(vertex, &out_edges)?;
        }
        for entry in db.graph_entries() {
            let graph = db.graph(entry.id).expect("listed graph");
            self.put_graph(&graph)?;
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Whole-database load

    /// Rebuild an in-memory database from the store: vertices with their
    /// memberships, edges reassembled from the out-edge columns (ids
    /// assigned in scan order), and logical graphs resolved through the
    /// persistent `(source, index)` edge identity.
    pub fn load_database(&self) -> Result<EpgmDatabase, StoreError> {
        let mut db = EpgmDatabase::new();
        let records = self.scan_vertices(None, None)?;
        for record in &records {
            db.insert_vertex(record.vertex.clone())
                .map_err(StoreError::Model)?;
        }
        let mut edge_ids: BTreeMap<(u64, u32), u64> = BTreeMap::new();
        let mut next_edge_id = 0u64;
        for record in &records {
            for stored in &record.out_edges {
                let mut edge = Edge::new(
                    next_edge_id,
                    stored.source,
                    stored.target,
                    stored.index,
                    stored.label.clone(),
                    stored.properties.clone(),
                );
                edge.graph_ids.clear();
                db.insert_edge(edge).map_err(StoreError::Model)?;
                edge_ids.insert((stored.source, stored.index), next_edge_id);
                next_edge_id += 1;
            }
        }
        for graph_id in self.graph_ids()? {
            let record = self.get_graph(graph_id, None)?.expect("listed id");
            let mut member_edges = Vec::with_capacity(record.edges.len());
            for edge_ref in &record.edges {
                let id = edge_ids
                    .get(&(edge_ref.source, edge_ref.index))
                    .copied()
                    .ok_or(StoreError::MissingMemberEdge {
                        graph: graph_id,
                        edge_source: edge_ref.source,
                        index: edge_ref.index,
                    })?;
                member_edges.push(id);
            }
            db.insert_graph(
                record.id,
                record.label,
                record.properties.into_iter().collect(),
                record.vertex_ids,
                member_edges,
            )
            .map_err(StoreError::Model)?;
        }
        Ok(db)
    }

    // ------------------------------------------------------------------
    // Raw cell inspection (tooling and byte-level tests)

    /// The live value of one cell at `as_of`, raw bytes.
    pub fn raw_cell(
        &self,
        family: Family,
        row: &[u8],
        qualifier: &[u8],
        as_of: Option<u64>,
    ) -> Option<Vec<u8>> {
        self.read_cell(family, row, qualifier, as_of.unwrap_or(LATEST))
    }

    /// All live cells of a row family at `as_of`, keyed by qualifier bytes.
    pub fn raw_row(
        &self,
        family: Family,
        row: &[u8],
        as_of: Option<u64>,
    ) -> BTreeMap<Vec<u8>, Vec<u8>> {
        self.live_row_cells(family, row, as_of.unwrap_or(LATEST))
    }

    // ------------------------------------------------------------------
    // Audits and statistics

    /// Full-store mirror audit: every live out-edge cell must have exactly
    /// one matching in-edge cell with swapped opposite vertex, and vice
    /// versa.
    pub fn audit_mirrors(&self) -> Result<(), StoreError> {
        let out_rows = self.collect_rows(&[Family::VertexOutEdges], None);
        let mut expected_mirrors: BTreeSet<(Vec<u8>, Vec<u8>)> = BTreeSet::new();
        for row in &out_rows {
            for (qualifier, value) in self.live_row_cells(Family::VertexOutEdges, row, LATEST) {
                let (type_id, partition, target, index) =
                    codec::decode_edge_qualifier(Family::VertexOutEdges, &qualifier)?;
                let target_row = codec::vertex_row_key(partition, target);
                let mirror = codec::edge_qualifier(type_id, row, index);
                let found = self.read_cell(Family::VertexInEdges, &target_row, &mirror, LATEST);
                if found.as_deref() != Some(value.as_slice()) {
                    let (_, source) = codec::decode_vertex_row_key(row)?;
                    return Err(StoreError::MirrorViolation {
                        edge_source: source,
                        target,
                        index,
                    });
                }
                expected_mirrors.insert((target_row, mirror));
            }
        }
        // Every live in-edge cell must be expected by some out-edge cell.
        let in_rows = self.collect_rows(&[Family::VertexInEdges], None);
        for row in &in_rows {
            for (qualifier, _) in self.live_row_cells(Family::VertexInEdges, row, LATEST) {
                if !expected_mirrors.contains(&(row.clone(), qualifier.clone())) {
                    let (_, target) = codec::decode_vertex_row_key(row)?;
                    let (_, _, source, index) =
                        codec::decode_edge_qualifier(Family::VertexInEdges, &qualifier)?;
                    return Err(StoreError::MirrorViolation {
                        edge_source: source,
                        target,
                        index,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> Result<StoreStats, StoreError> {
        let records = self.scan_vertices(None, None)?;
        let mut per_partition: BTreeMap<u16, usize> = BTreeMap::new();
        let mut label_histogram: BTreeMap<String, usize> = BTreeMap::new();
        let mut edges = 0usize;
        for record in &records {
            *per_partition
                .entry(self.partitioner.assign(record.vertex.id))
                .or_default() += 1;
            *label_histogram
                .entry(record.vertex.label.clone())
                .or_default() += 1;
            edges += record.out_edges.len();
        }
        Ok(StoreStats {
            vertices: records.len(),
            edges,
            graphs: self.graph_ids()?.len(),
            per_partition,
            label_histogram,
        })
    }

    // ------------------------------------------------------------------
    // Maintenance

    /// Flush the memtable into a fresh immutable segment and reset the
    /// journal.
    pub fn flush(&mut self) -> Result<(), StoreError> {
        if self.memtable.is_empty() {
            return Ok(());
        }
        let path = self
            .config
            .path
            .join("segments")
            .join(format!("{:010}.seg", self.next_segment_seq));
        self.next_segment_seq += 1;
        let cells = std::mem::take(&mut self.memtable);
        write_segment(&path, &cells)?;
        self.segments.push(Segment { path, cells });
        self.journal.truncate()?;
        Ok(())
    }

    /// Merge all segments into one, physically trimming versions beyond the
    /// retention limit and dropping cells whose retained versions are all
    /// tombstones.
    pub fn compact(&mut self) -> Result<(), StoreError> {
        self.flush()?;
        if self.segments.len() <= 1 {
            return Ok(());
        }
        type Versions = BTreeMap<u64, Option<Vec<u8>>>;
        let mut per_cell: BTreeMap<(u8, Vec<u8>, Vec<u8>), Versions> = BTreeMap::new();
        for segment in self.segments.iter().rev() {
            for (key, value) in &segment.cells {
                per_cell
                    .entry((key.family, key.row.clone(), key.qualifier.clone()))
                    .or_default()
                    .entry(key.ts())
                    .or_insert_with(|| value.clone());
            }
        }
        let mut merged: BTreeMap<CellKey, Option<Vec<u8>>> = BTreeMap::new();
        for ((family, row, qualifier), versions) in per_cell {
            let retained: Vec<(u64, Option<Vec<u8>>)> = versions
                .into_iter()
                .rev()
                .take(self.config.max_versions as usize)
                .collect();
            if retained.iter().all(|(_, v)| v.is_none()) {
                continue;
            }
            for (ts, value) in retained {
                merged.insert(
                    CellKey {
                        family,
                        row: row.clone(),
                        qualifier: qualifier.clone(),
                        ts_rev: !ts,
                    },
                    value,
                );
            }
        }
        let path = self
            .config
            .path
            .join("segments")
            .join(format!("{:010}.seg", self.next_segment_seq));
        self.next_segment_seq += 1;
        write_segment(&path, &merged)?;
        let old_paths: Vec<PathBuf> = self.segments.iter().map(|s| s.path.clone()).collect();
        self.segments = vec![Segment {
            path,
            cells: merged,
        }];
        for old in old_paths {
            std::fs::remove_file(old)?;
        }
        Ok(())
    }

    /// Clean shutdown: flush and persist metadata. Dropping the store
    /// without closing is the crash case; the journal then carries the
    /// unflushed state.
    pub fn close(mut self) -> Result<(), StoreError> {
        self.flush()?;
        self.rewrite_meta()?;
        Ok(())
    }

    /// Current logical timestamp (the newest write's).
    pub fn now(&self) -> u64 {
        self.clock
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::props;

    #[test]
    fn mirror_audit_catches_an_orphan_cell() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = GraphStore::open(StoreConfig::hash(dir.path(), 1)).unwrap();
        let mut db = EpgmDatabase::new();
        let a = db.add_vertex("X", props! {});
        let b = db.add_vertex("X", props! {});
        db.add_edge(a, b, "e", props! {}).unwrap();
        store.put_database(&db).unwrap();
        store.audit_mirrors().unwrap();

        // Drop the in-edge twin behind the store's back.
        let type_id = store.dict.id_of("e").unwrap();
        let source_row = store.row_of(a);
        let target_row = store.row_of(b);
        let mirror = codec::edge_qualifier(type_id, &source_row, 0);
        let ts = store.tick();
        store
            .write_cell(Family::VertexInEdges, target_row, mirror, ts, None)
            .unwrap();
        assert!(matches!(
            store.audit_mirrors(),
            Err(StoreError::MirrorViolation { .. })
        ));
    }
}
