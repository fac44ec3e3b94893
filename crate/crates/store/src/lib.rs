//! Persistent, versioned, partitioned wide-column graph store.
//!
//! Layout on disk: `<path>/journal.log` (write-ahead journal),
//! `<path>/segments/*.seg` (immutable sorted segment files merged on
//! compaction) and `<path>/meta` (configuration, label dictionary, region
//! boundaries, graph id allocation). All multi-byte integers on disk are
//! big-endian.
//!
//! The vertex table stores each vertex denormalized — properties, outgoing
//! and (mirrored) incoming edges, graph memberships — so loading a vertex
//! with its incident edges is one row read. The graph table stores one row
//! per logical graph with a versioned member list and per-vertex member
//! edge columns, which is what makes graph snapshots at a timestamp work.

pub mod cell;
pub mod codec;
pub mod dictionary;
pub mod journal;
pub mod partition;
pub mod row_codec;
pub mod segment;
pub mod store;

use std::path::PathBuf;

use thiserror::Error;

pub use codec::Family;
pub use dictionary::LabelDictionary;
pub use journal::SyncMode;
pub use partition::{PartitionStrategy, Partitioner};
pub use row_codec::{decode_vertex_row, encode_vertex_row, RowCell};
pub use store::{
    EdgeRef, GraphRecord, GraphStore, StoreConfig, StoreStats, StoredEdge, VertexRecord, LATEST,
};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("store metadata error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("store configuration mismatch: {field} differs from the existing store")]
    ConfigMismatch { field: &'static str },

    #[error("bad store configuration: {0}")]
    BadConfig(String),

    #[error("corrupt journal record at byte offset {offset}")]
    CorruptJournal { offset: u64 },

    #[error("corrupt segment {path} at byte offset {offset}")]
    CorruptSegment { path: PathBuf, offset: u64 },

    #[error("corrupt cell in family {family}, {context}: {detail}")]
    CorruptCell {
        family: &'static str,
        context: &'static str,
        detail: String,
    },

    #[error("label id {0} is not in the dictionary")]
    UnknownLabelId(u16),

    #[error("vertex {vertex} does not exist in the vertex table")]
    DanglingElement { vertex: u64 },

    #[error("edge with source {edge_source} cannot be stored on vertex {vertex}")]
    ForeignEdge { vertex: u64, edge_source: u64 },

    #[error("graph {graph} references missing member edge ({edge_source}, {index})")]
    MissingMemberEdge {
        graph: u64,
        edge_source: u64,
        index: u32,
    },

    #[error("mirror violation: edge ({edge_source}, {index}) -> {target} lacks its twin cell")]
    MirrorViolation {
        edge_source: u64,
        target: u64,
        index: u32,
    },

    #[error(transparent)]
    Model(epgm_model::ModelError),
}

impl StoreError {
    pub(crate) fn corrupt_cell(
        family: Family,
        context: &'static str,
        detail: impl Into<String>,
    ) -> StoreError {
        StoreError::CorruptCell {
            family: family.name(),
            context,
            detail: detail.into(),
        }
    }
}
