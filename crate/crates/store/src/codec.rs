//! Byte layouts. All multi-byte integers are big-endian so lexicographic
//! byte order equals numeric order.
//!
//! Vertex table row key: `[partition u16][vertex id u64]`, 10 bytes.
//! Graph table row key: `[graph id u64]`, 8 bytes.
//! Edge qualifier: `[edge type u16][opposite row key 10][index u32]`,
//! 16 bytes; the same bytes appear in the source row's out-edges family and
//! the target row's in-edges family with the opposite vertex swapped.
//!
//! Vertex/graph property cell: `[type code u8][payload]`.
//! Edge property cell: `[count u32]` then per property
//! `[key len u16][key][type code u8][payload]`; string payloads carry a
//! `[len u32]` prefix, numeric and boolean payloads are fixed width.
//! Type codes: 0 int64, 1 float64, 2 boolean, 5 string (3 and 4 reserved).

use epgm_model::{Properties, PropertyValue};

use crate::StoreError;

pub const VERTEX_ROW_KEY_LEN: usize = 10;
pub const GRAPH_ROW_KEY_LEN: usize = 8;
pub const EDGE_QUALIFIER_LEN: usize = 16;

/// Column families, table-qualified: a family id pins the table and with it
/// the row-key width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Family {
    VertexMeta = 0,
    VertexProperties = 1,
    VertexOutEdges = 2,
    VertexInEdges = 3,
    GraphMeta = 4,
    GraphProperties = 5,
    GraphEdges = 6,
}

impl Family {
    pub fn from_u8(value: u8) -> Option<Family> {
        match value {
            0 => Some(Family::VertexMeta),
            1 => Some(Family::VertexProperties),
            2 => Some(Family::VertexOutEdges),
            3 => Some(Family::VertexInEdges),
            4 => Some(Family::GraphMeta),
            5 => Some(Family::GraphProperties),
            6 => Some(Family::GraphEdges),
            _ => None,
        }
    }

    pub fn row_key_len(self) -> usize {
        match self {
            Family::VertexMeta
            | Family::VertexProperties
            | Family::VertexOutEdges
            | Family::VertexInEdges => VERTEX_ROW_KEY_LEN,
            Family::GraphMeta | Family::GraphProperties | Family::GraphEdges => GRAPH_ROW_KEY_LEN,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::VertexMeta => "meta",
            Family::VertexProperties => "properties",
            Family::VertexOutEdges => "out-edges",
            Family::VertexInEdges => "in-edges",
            Family::GraphMeta => "meta",
            Family::GraphProperties => "properties",
            Family::GraphEdges => "edges",
        }
    }
}

pub const META_TYPE: &[u8] = b"type";
pub const META_GRAPHS: &[u8] = b"graphs";
pub const META_IDX: &[u8] = b"idx";
pub const META_VERTICES: &[u8] = b"vertices";

// ----------------------------------------------------------------------
// Row keys

pub fn vertex_row_key(partition: u16, vertex_id: u64) -> Vec<u8> {
    let mut key = Vec::with_capacity(VERTEX_ROW_KEY_LEN);
    key.extend_from_slice(&partition.to_be_bytes());
    key.extend_from_slice(&vertex_id.to_be_bytes());
    key
}

pub fn decode_vertex_row_key(bytes: &[u8]) -> Result<(u16, u64), StoreError> {
    if bytes.len() != VERTEX_ROW_KEY_LEN {
        return Err(StoreError::corrupt_cell(
            Family::VertexMeta,
            "row key",
            format!("expected 10 bytes, found {}", bytes.len()),
        ));
    }
    let partition = u16::from_be_bytes([bytes[0], bytes[1]]);
    let id = u64::from_be_bytes(bytes[2..10].try_into().unwrap());
    Ok((partition, id))
}

pub fn graph_row_key(graph_id: u64) -> Vec<u8> {
    graph_id.to_be_bytes().to_vec()
}

pub fn decode_graph_row_key(bytes: &[u8]) -> Result<u64, StoreError> {
    if bytes.len() != GRAPH_ROW_KEY_LEN {
        return Err(StoreError::corrupt_cell(
            Family::GraphMeta,
            "row key",
            format!("expected 8 bytes, found {}", bytes.len()),
        ));
    }
    Ok(u64::from_be_bytes(bytes.try_into().unwrap()))
}

// ----------------------------------------------------------------------
// Edge qualifiers

pub fn edge_qualifier(edge_type: u16, opposite_row_key: &[u8], index: u32) -> Vec<u8> {
    debug_assert_eq!(opposite_row_key.len(), VERTEX_ROW_KEY_LEN);
    let mut q = Vec::with_capacity(EDGE_QUALIFIER_LEN);
    q.extend_from_slice(&edge_type.to_be_bytes());
    q.extend_from_slice(opposite_row_key);
    q.extend_from_slice(&index.to_be_bytes());
    q
}

pub fn decode_edge_qualifier(
    family: Family,
    bytes: &[u8],
) -> Result<(u16, u16, u64, u32), StoreError> {
    if bytes.len() != EDGE_QUALIFIER_LEN {
        return Err(StoreError::corrupt_cell(
            family,
            "edge qualifier",
            format!("expected 16 bytes, found {}", bytes.len()),
        ));
    }
    let edge_type = u16::from_be_bytes([bytes[0], bytes[1]]);
    let partition = u16::from_be_bytes([bytes[2], bytes[3]]);
    let opposite = u64::from_be_bytes(bytes[4..12].try_into().unwrap());
    let index = u32::from_be_bytes(bytes[12..16].try_into().unwrap());
    Ok((edge_type, partition, opposite, index))
}

// ----------------------------------------------------------------------
// Scalar cells

pub fn encode_u16(value: u16) -> Vec<u8> {
    value.to_be_bytes().to_vec()
}

pub fn decode_u16(family: Family, bytes: &[u8]) -> Result<u16, StoreError> {
    bytes
        .try_into()
        .map(u16::from_be_bytes)
        .map_err(|_| StoreError::corrupt_cell(family, "u16 cell", format!("{} bytes", bytes.len())))
}

pub fn encode_u32(value: u32) -> Vec<u8> {
    value.to_be_bytes().to_vec()
}

pub fn decode_u32(family: Family, bytes: &[u8]) -> Result<u32, StoreError> {
    bytes
        .try_into()
        .map(u32::from_be_bytes)
        .map_err(|_| StoreError::corrupt_cell(family, "u32 cell", format!("{} bytes", bytes.len())))
}

/// `[count u32][count x u64]`, used by the meta `graphs` column.
pub fn encode_u64_list(values: impl IntoIterator<Item = u64>) -> Vec<u8> {
    let values: Vec<u64> = values.into_iter().collect();
    let mut out = Vec::with_capacity(4 + values.len() * 8);
    out.extend_from_slice(&(values.len() as u32).to_be_bytes());
    for v in values {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

pub fn decode_u64_list(family: Family, bytes: &[u8]) -> Result<Vec<u64>, StoreError> {
    if bytes.len() < 4 {
        return Err(StoreError::corrupt_cell(
            family,
            "id list",
            "truncated count",
        ));
    }
    let count = u32::from_be_bytes(bytes[0..4].try_into().unwrap()) as usize;
    if bytes.len() != 4 + count * 8 {
        return Err(StoreError::corrupt_cell(
            family,
            "id list",
            format!("count {count} does not match {} bytes", bytes.len()),
        ));
    }
    Ok((0..count)
        .map(|i| u64::from_be_bytes(bytes[4 + i * 8..12 + i * 8].try_into().unwrap()))
        .collect())
}

/// `[count u32][count x 10-byte row keys]`, the graph meta `vertices` list.
pub fn encode_row_key_list(keys: &[Vec<u8>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + keys.len() * VERTEX_ROW_KEY_LEN);
    out.extend_from_slice(&(keys.len() as u32).to_be_bytes());
    for key in keys {
        debug_assert_eq!(key.len(), VERTEX_ROW_KEY_LEN);
        out.extend_from_slice(key);
    }
    out
}

pub fn decode_row_key_list(family: Family, bytes: &[u8]) -> Result<Vec<Vec<u8>>, StoreError> {
    if bytes.len() < 4 {
        return Err(StoreError::corrupt_cell(
            family,
            "row key list",
            "truncated count",
        ));
    }
    let count = u32::from_be_bytes(bytes[0..4].try_into().unwrap()) as usize;
    if bytes.len() != 4 + count * VERTEX_ROW_KEY_LEN {
        return Err(StoreError::corrupt_cell(
            family,
            "row key list",
            format!("count {count} does not match {} bytes", bytes.len()),
        ));
    }
    Ok((0..count)
        .map(|i| bytes[4 + i * VERTEX_ROW_KEY_LEN..4 + (i + 1) * VERTEX_ROW_KEY_LEN].to_vec())
        .collect())
}

/// `[count u32][count x 16-byte edge qualifiers]`, a graph-table edge cell.
pub fn encode_qualifier_list(qualifiers: &[Vec<u8>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + qualifiers.len() * EDGE_QUALIFIER_LEN);
    out.extend_from_slice(&(qualifiers.len() as u32).to_be_bytes());
    for q in qualifiers {
        debug_assert_eq!(q.len(), EDGE_QUALIFIER_LEN);
        out.extend_from_slice(q);
    }
    out
}

pub fn decode_qualifier_list(family: Family, bytes: &[u8]) -> Result<Vec<Vec<u8>>, StoreError> {
    if bytes.len() < 4 {
        return Err(StoreError::corrupt_cell(
            family,
            "qualifier list",
            "truncated count",
        ));
    }
    let count = u32::from_be_bytes(bytes[0..4].try_into().unwrap()) as usize;
    if bytes.len() != 4 + count * EDGE_QUALIFIER_LEN {
        return Err(StoreError::corrupt_cell(
            family,
            "qualifier list",
            format!("count {count} does not match {} bytes", bytes.len()),
        ));
    }
    Ok((0..count)
        .map(|i| bytes[4 + i * EDGE_QUALIFIER_LEN..4 + (i + 1) * EDGE_QUALIFIER_LEN].to_vec())
        .collect())
}

// ----------------------------------------------------------------------
// Property cells

/// Vertex and graph property cell: one type-code byte plus the payload.
pub fn encode_property_cell(value: &PropertyValue) -> Vec<u8> {
    let mut out = vec![value.type_code()];
    match value {
        PropertyValue::Int(v) => out.extend_from_slice(&v.to_be_bytes()),
        PropertyValue::Float(v) => out.extend_from_slice(&v.to_bits().to_be_bytes()),
        PropertyValue::Bool(v) => out.push(*v as u8),
        PropertyValue::Str(v) => out.extend_from_slice(v.as_bytes()),
    }
    out
}

pub fn decode_property_cell(family: Family, bytes: &[u8]) -> Result<PropertyValue, StoreError> {
    let (&code, payload) = bytes
        .split_first()
        .ok_or_else(|| StoreError::corrupt_cell(family, "property cell", "empty cell"))?;
    decode_typed_payload(family, code, payload)
}

fn decode_typed_payload(
    family: Family,
    code: u8,
    payload: &[u8],
) -> Result<PropertyValue, StoreError> {
    match code {
        0 => payload
            .try_into()
            .map(|b| PropertyValue::Int(i64::from_be_bytes(b)))
            .map_err(|_| {
                StoreError::corrupt_cell(
                    family,
                    "int64 payload",
                    format!("{} bytes", payload.len()),
                )
            }),
        1 => payload
            .try_into()
            .map(|b| PropertyValue::Float(f64::from_bits(u64::from_be_bytes(b))))
            .map_err(|_| {
                StoreError::corrupt_cell(
                    family,
                    "float64 payload",
                    format!("{} bytes", payload.len()),
                )
            }),
        2 => match payload {
            [0] => Ok(PropertyValue::Bool(false)),
            [1] => Ok(PropertyValue::Bool(true)),
            _ => Err(StoreError::corrupt_cell(
                family,
                "boolean payload",
                "not 0 or 1",
            )),
        },
        5 => String::from_utf8(payload.to_vec())
            .map(PropertyValue::Str)
            .map_err(|_| StoreError::corrupt_cell(family, "string payload", "invalid utf-8")),
        other => Err(StoreError::corrupt_cell(
            family,
            "property cell",
            format!("unknown type code {other}"),
        )),
    }
}

/// Edge property cell: count-prefixed (key, type, value) tuples. Reading a
/// single edge property deserializes the whole list.
pub fn encode_edge_properties(properties: &Properties) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(properties.len() as u32).to_be_bytes());
    for (key, value) in properties.iter() {
        out.extend_from_slice(&(key.len() as u16).to_be_bytes());
        out.extend_from_slice(key.as_bytes());
        out.push(value.type_code());
        match value {
            PropertyValue::Int(v) => out.extend_from_slice(&v.to_be_bytes()),
            PropertyValue::Float(v) => out.extend_from_slice(&v.to_bits().to_be_bytes()),
            PropertyValue::Bool(v) => out.push(*v as u8),
            PropertyValue::Str(v) => {
                out.extend_from_slice(&(v.len() as u32).to_be_bytes());
                out.extend_from_slice(v.as_bytes());
            }
        }
    }
    out
}

pub fn decode_edge_properties(family: Family, bytes: &[u8]) -> Result<Properties, StoreError> {
    let corrupt = |detail: &str| StoreError::corrupt_cell(family, "edge properties", detail);
    if bytes.len() < 4 {
        return Err(corrupt("truncated count"));
    }
    let count = u32::from_be_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let mut cursor = 4usize;
    let mut properties = Properties::new();
    for _ in 0..count {
        if bytes.len() < cursor + 2 {
            return Err(corrupt("truncated key length"));
        }
        let key_len = u16::from_be_bytes(bytes[cursor..cursor + 2].try_into().unwrap()) as usize;
        cursor += 2;
        if bytes.len() < cursor + key_len + 1 {
            return Err(corrupt("truncated key"));
        }
        let key = String::from_utf8(bytes[cursor..cursor + key_len].to_vec())
            .map_err(|_| corrupt("key is not utf-8"))?;
        cursor += key_len;
        let code = bytes[cursor];
        cursor += 1;
        let payload_len = match code {
            0 | 1 => 8,
            2 => 1,
            5 => {
                if bytes.len() < cursor + 4 {
                    return Err(corrupt("truncated string length"));
                }
                let len =
                    u32::from_be_bytes(bytes[cursor..cursor + 4].try_into().unwrap()) as usize;
                cursor += 4;
                len
            }
            other => return Err(corrupt(&format!("unknown type code {other}"))),
        };
        if bytes.len() < cursor + payload_len {
            return Err(corrupt("truncated payload"));
        }
        let value = decode_typed_payload(family, code, &bytes[cursor..cursor + payload_len])?;
        cursor += payload_len;
        properties.set(key, value);
    }
    if cursor != bytes.len() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(properties)
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::props;

    #[test]
    fn vertex_row_key_bytes() {
        // Partition 0, vertex 0: ten zero bytes.
        assert_eq!(vertex_row_key(0, 0), vec![0u8; 10]);
        let key = vertex_row_key(1, 0x0102030405060708);
        assert_eq!(key, vec![0, 1, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(
            decode_vertex_row_key(&key).unwrap(),
            (1, 0x0102030405060708)
        );
    }

    #[test]
    fn row_key_order_matches_numeric_order() {
        let mut keys = vec![
            vertex_row_key(1, 0),
            vertex_row_key(0, 500),
            vertex_row_key(0, 2),
            vertex_row_key(1, 1),
        ];
        keys.sort();
        assert_eq!(
            keys,
            vec![
                vertex_row_key(0, 2),
                vertex_row_key(0, 500),
                vertex_row_key(1, 0),
                vertex_row_key(1, 1),
            ]
        );
    }

    #[test]
    fn edge_qualifier_bytes() {
        // Edge type knows=2 toward vertex 1 in partition 0, index 0:
        // 00 02 | 00 00 | 00 00 00 00 00 00 00 01 | 00 00 00 00.
        let q = edge_qualifier(2, &vertex_row_key(0, 1), 0);
        assert_eq!(q, vec![0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(
            decode_edge_qualifier(Family::VertexOutEdges, &q).unwrap(),
            (2, 0, 1, 0)
        );
    }

    #[test]
    fn property_cells_follow_the_type_code_table() {
        // String code 5.
        let alice = encode_property_cell(&PropertyValue::Str("Alice".into()));
        assert_eq!(alice, vec![5, b'A', b'l', b'i', b'c', b'e']);
        // Int code 0; 2014 big-endian.
        let since = encode_property_cell(&PropertyValue::Int(2014));
        assert_eq!(since, vec![0, 0, 0, 0, 0, 0, 0, 0x07, 0xDE]);
        for value in [
            PropertyValue::Int(-5),
            PropertyValue::Float(2.5),
            PropertyValue::Bool(true),
            PropertyValue::Str("x".into()),
        ] {
            let cell = encode_property_cell(&value);
            assert_eq!(
                decode_property_cell(Family::VertexProperties, &cell).unwrap(),
                value
            );
        }
    }

    #[test]
    fn corrupted_type_code_is_an_error() {
        let err = decode_property_cell(Family::VertexProperties, &[9, 1, 2, 3]).unwrap_err();
        assert!(err.to_string().contains("unknown type code 9"));
    }

    #[test]
    fn edge_property_list_round_trips() {
        let props = props! { "since" => 2014i64, "weight" => 0.5f64, "ok" => true, "tag" => "x" };
        let cell = encode_edge_properties(&props);
        let decoded = decode_edge_properties(Family::VertexOutEdges, &cell).unwrap();
        assert_eq!(decoded, props);
        // The canonical single-property example.
        let single = encode_edge_properties(&props! { "since" => 2014i64 });
        let expected: Vec<u8> = [
            &[0, 0, 0, 1][..],
            &[0, 5][..],
            b"since",
            &[0],
            &2014i64.to_be_bytes()[..],
        ]
        .concat();
        assert_eq!(single, expected);
    }

    #[test]
    fn list_cells_round_trip() {
        let ids = encode_u64_list([0, 2]);
        assert_eq!(
            decode_u64_list(Family::VertexMeta, &ids).unwrap(),
            vec![0, 2]
        );
        let keys = vec![vertex_row_key(0, 0), vertex_row_key(0, 1)];
        let list = encode_row_key_list(&keys);
        assert_eq!(decode_row_key_list(Family::GraphMeta, &list).unwrap(), keys);
        let quals = vec![edge_qualifier(2, &vertex_row_key(0, 1), 0)];
        let qlist = encode_qualifier_list(&quals);
        assert_eq!(
            decode_qualifier_list(Family::GraphEdges, &qlist).unwrap(),
            quals
        );
    }
}
