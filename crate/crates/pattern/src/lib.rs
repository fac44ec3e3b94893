//! Pattern graphs parsed from ASCII syntax and predicate-filtered subgraph
//! isomorphism matching over logical graphs.

pub mod matcher;
pub mod parse;

use std::collections::BTreeMap;

use thiserror::Error;

pub use matcher::match_pattern;
pub use parse::parse_pattern;

/// Error type for user-supplied binding predicates.
pub type DynError = Box<dyn std::error::Error + Send + Sync + 'static>;

/// A variable-named pattern: vertex variables and directed edges between
/// them, direction already normalized to (source -> target).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternGraph {
    pub vertex_vars: Vec<String>,
    pub edges: Vec<PatternEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEdge {
    pub var: String,
    /// Index into `vertex_vars`.
    pub source: usize,
    pub target: usize,
}

impl PatternGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_vars.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// An injective assignment of pattern variables to element ids, respecting
/// pattern adjacency and edge direction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Embedding {
    pub vertices: BTreeMap<String, u64>,
    pub edges: BTreeMap<String, u64>,
}

impl Embedding {
    pub fn vertex(&self, var: &str) -> Option<u64> {
        self.vertices.get(var).copied()
    }

    pub fn edge(&self, var: &str) -> Option<u64> {
        self.edges.get(var).copied()
    }
}

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("pattern syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("duplicate edge variable {var:?} at byte {position}")]
    DuplicateEdgeVariable { var: String, position: usize },

    #[error("binding predicate failed: {source}")]
    PredicateFailed { source: DynError },
}
