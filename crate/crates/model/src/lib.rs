//! Extended property graph model: a database holds shared vertex and edge
//! spaces plus a set of logical graphs, all of them labeled and attributed,
//! with graphs allowed to overlap arbitrarily. Graph collections are ordered
//! and first-class, which is what the operator algebra in the sibling crates
//! works on.

pub mod database;
pub mod element;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod json;
pub mod property;

pub use database::{EpgmDatabase, GraphEntry};
pub use element::{Edge, Vertex, DETACHED_ID};
pub use error::ModelError;
pub use graph::{
    is_temporary, GraphCollection, IdSource, LogicalGraph, DATABASE_GRAPH_ID, TEMP_ID_BASE,
};
pub use property::{Properties, PropertyValue};
