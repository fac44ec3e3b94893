use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("edge endpoint {vertex} does not exist in the vertex space")]
    DanglingEndpoint { vertex: u64 },

    #[error("edge index {index} already in use at source vertex {vertex}")]
    DuplicateEdgeIndex { vertex: u64, index: u32 },

    #[error("edge {edge} has an endpoint outside the graph's vertex set")]
    ClosureViolation { edge: u64 },

    #[error("unknown vertex {0}")]
    UnknownVertex(u64),

    #[error("unknown edge {0}")]
    UnknownEdge(u64),

    #[error("unknown graph {0}")]
    UnknownGraph(u64),

    #[error("{space} id {id} is already taken")]
    IdCollision { space: &'static str, id: u64 },

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
