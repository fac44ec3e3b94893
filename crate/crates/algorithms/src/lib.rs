//! Pluggable graph algorithms behind a symbol-addressed registry: community
//! detection via deterministic synchronous label propagation, splitting an
//! annotated graph into per-community graphs, and business transaction graph
//! extraction over classified vertex labels.

pub mod btg;
pub mod label_propagation;
pub mod registry;

use thiserror::Error;

pub use btg::{btg_extract, BtgParams};
pub use label_propagation::{community_split, label_propagation, DEFAULT_MAX_ITERATIONS};
pub use registry::{AlgorithmFn, AlgorithmRegistry, CallInput, CallOutput, OutputArity, Params};

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("algorithm symbol :{symbol} is already registered")]
    DuplicateSymbol { symbol: String },

    #[error("unknown algorithm symbol :{symbol}")]
    UnknownSymbol { symbol: String },

    #[error("algorithm :{symbol} produces a {declared}, but a {expected} was requested")]
    ArityMismatch {
        symbol: String,
        expected: &'static str,
        declared: &'static str,
    },

    #[error("missing required parameter {param:?}")]
    MissingParam { param: String },

    #[error("parameter {param:?} has unusable value {value:?}")]
    BadParam { param: String, value: String },

    #[error("vertex {vertex} lacks required property {key:?}")]
    MissingProperty { key: String, vertex: u64 },

    #[error("vertex {vertex} has label {label:?}, classified neither transactional nor master")]
    UnclassifiedLabel { label: String, vertex: u64 },

    #[error("algorithm expected a graph but received an empty collection")]
    EmptyCollectionInput,
}
