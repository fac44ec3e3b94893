//! Pure row-level codec: a vertex plus its outgoing edges to and from the
//! cells of its vertex-table row. `decode ∘ encode` is the identity,
//! bit-exactly; the store writes and reads rows through this layer.

use epgm_model::{Edge, Properties, Vertex};

use crate::codec::{self, Family};
use crate::dictionary::LabelDictionary;
use crate::partition::Partitioner;
use crate::store::StoredEdge;
use crate::StoreError;

/// One cell of a row: family, qualifier and value bytes (timestamps are a
/// write-path concern).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCell {
    pub family: Family,
    pub qualifier: Vec<u8>,
    pub value: Vec<u8>,
}

/// Encode a vertex row: the meta columns (`type`, `graphs` and `idx`, the
/// latter two only when non-empty), one property column per key and one
/// out-edge column per outgoing edge. Labels intern into the dictionary on
/// demand. Returns the row key and the row's cells.
pub fn encode_vertex_row(
    vertex: &Vertex,
    out_edges: &[Edge],
    partitioner: &Partitioner,
    dict: &mut LabelDictionary,
) -> Result<(Vec<u8>, Vec<RowCell>), StoreError> {
    for edge in out_edges {
        if edge.source != vertex.id {
            return Err(StoreError::ForeignEdge {
                vertex: vertex.id,
                edge_source: edge.source,
            });
        }
    }
    let row = codec::vertex_row_key(partitioner.assign(vertex.id), vertex.id);
    let mut cells = Vec::with_capacity(3 + vertex.properties.len() + out_edges.len());

    cells.push(RowCell {
        family: Family::VertexMeta,
        qualifier: codec::META_TYPE.to_vec(),
        value: codec::encode_u16(dict.intern(&vertex.label)),
    });
    if !vertex.graph_ids.is_empty() {
        cells.push(RowCell {
            family: Family::VertexMeta,
            qualifier: codec::META_GRAPHS.to_vec(),
            value: codec::encode_u64_list(vertex.graph_ids.iter().copied()),
        });
    }
    if !out_edges.is_empty() {
        let next = out_edges.iter().map(|e| e.source_index).max().unwrap() + 1;
        cells.push(RowCell {
            family: Family::VertexMeta,
            qualifier: codec::META_IDX.to_vec(),
            value: codec::encode_u32(next),
        });
    }
    for (key, value) in vertex.properties.iter() {
        cells.push(RowCell {
            family: Family::VertexProperties,
            qualifier: key.as_bytes().to_vec(),
            value: codec::encode_property_cell(value),
        });
    }
    for edge in out_edges {
        let type_id = dict.intern(&edge.label);
        let target_row = codec::vertex_row_key(partitioner.assign(edge.target), edge.target);
        cells.push(RowCell {
            family: Family::VertexOutEdges,
            qualifier: codec::edge_qualifier(type_id, &target_row, edge.source_index),
            value: codec::encode_edge_properties(&edge.properties),
        });
    }
    Ok((row, cells))
}

/// Decode a vertex row back into the vertex and its outgoing edges.
/// Malformed bytes report the family and qualifier they were found under.
pub fn decode_vertex_row(
    row: &[u8],
    cells: &[RowCell],
    dict: &LabelDictionary,
) -> Result<(Vertex, Vec<StoredEdge>), StoreError> {
    let (_, vertex_id) = codec::decode_vertex_row_key(row)?;
    let mut vertex = Vertex::new(vertex_id, "", Properties::new());
    let mut saw_type = false;
    let mut out_edges = Vec::new();

    for cell in cells {
        match cell.family {
            Family::VertexMeta => match cell.qualifier.as_slice() {
                q if q == codec::META_TYPE => {
                    let type_id = codec::decode_u16(Family::VertexMeta, &cell.value)?;
                    vertex.label = dict.label_of(type_id)?.to_string();
                    saw_type = true;
                }
                q if q == codec::META_GRAPHS => {
                    vertex.graph_ids = codec::decode_u64_list(Family::VertexMeta, &cell.value)?
                        .into_iter()
                        .collect();
                }
                q if q == codec::META_IDX => {
                    codec::decode_u32(Family::VertexMeta, &cell.value)?;
                }
                other => {
                    return Err(StoreError::corrupt_cell(
                        Family::VertexMeta,
                        "column",
                        format!("unknown qualifier {other:?}"),
                    ))
                }
            },
            Family::VertexProperties => {
                let key = String::from_utf8(cell.qualifier.clone()).map_err(|_| {
                    StoreError::corrupt_cell(Family::VertexProperties, "column", "key is not utf-8")
                })?;
                vertex.properties.set(
                    key,
                    codec::decode_property_cell(Family::VertexProperties, &cell.value)?,
                );
            }
            Family::VertexOutEdges => {
                let (type_id, _, target, index) =
                    codec::decode_edge_qualifier(Family::VertexOutEdges, &cell.qualifier)?;
                out_edges.push(StoredEdge {
                    source: vertex_id,
                    target,
                    index,
                    label: dict.label_of(type_id)?.to_string(),
                    properties: codec::decode_edge_properties(Family::VertexOutEdges, &cell.value)?,
                });
            }
            other => {
                return Err(StoreError::corrupt_cell(
                    other,
                    "vertex row",
                    "family does not belong to a vertex row's own cells",
                ))
            }
        }
    }
    if !saw_type {
        return Err(StoreError::corrupt_cell(
            Family::VertexMeta,
            "row",
            "missing type column",
        ));
    }
    out_edges.sort_by_key(|e| e.index);
    Ok((vertex, out_edges))
}
