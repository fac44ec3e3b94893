//! Bulk import into a store from JSON datasets or typed CSV files.
//!
//! CSV column conventions: plain `id`, `label` (edges add `source`,
//! `target` and optional `index`; graphs add space-separated `vertices` and
//! `edges` id lists) plus any number of typed property columns named
//! `key:type` with type one of int64, float64, boolean, string. Empty cells
//! mean the property is absent on that row.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use epgm_model::json::{parse_dataset, DatasetJson};
use epgm_model::{Edge, EpgmDatabase, Properties, PropertyValue, Vertex};
use epgm_store::GraphStore;

use crate::error::CliError;

pub struct ImportReport {
    pub vertices: usize,
    pub edges: usize,
    pub graphs: usize,
    pub elapsed: std::time::Duration,
}

/// Import a JSON dataset file (the fixture schema). The optional `labels`
/// array seeds the store dictionary.
pub fn import_json(store: &mut GraphStore, path: &Path) -> Result<ImportReport, CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(path)?;
    let dataset = parse_dataset(&text)?;
    let labels = dataset.labels.clone();
    let db = dataset.into_database()?;
    store.seed_labels(&labels)?;
    store.put_database(&db)?;
    Ok(ImportReport {
        vertices: db.vertex_count(),
        edges: db.edge_count(),
        graphs: db.graph_count(),
        elapsed: started.elapsed(),
    })
}

/// Import typed CSV files. Row numbers in errors are 1-based data rows
/// (the header is row 0).
pub fn import_csv(
    store: &mut GraphStore,
    vertices: &Path,
    edges: &Path,
    graphs: Option<&Path>,
) -> Result<ImportReport, CliError> {
    let started = Instant::now();
    let mut db = EpgmDatabase::new();

    // Vertices.
    let (headers, rows) = read_csv(vertices)?;
    let id_col = require_column(vertices, &headers, "id")?;
    let label_col = require_column(vertices, &headers, "label")?;
    let prop_cols = property_columns(vertices, &headers)?;
    for (row_no, row) in rows.iter().enumerate() {
        let row_no = row_no + 1;
        let id = parse_id(vertices, row_no, &row[id_col])?;
        let properties = parse_properties(vertices, row_no, row, &prop_cols)?;
        db.insert_vertex(Vertex::new(id, row[label_col].clone(), properties))
            .map_err(|e| CliError::ImportRow {
                path: vertices.to_path_buf(),
                row: row_no,
                message: e.to_string(),
            })?;
    }

    // Edges.
    let (headers, rows) = read_csv(edges)?;
    let id_col = require_column(edges, &headers, "id")?;
    let source_col = require_column(edges, &headers, "source")?;
    let target_col = require_column(edges, &headers, "target")?;
    let label_col = require_column(edges, &headers, "label")?;
    let index_col = headers.iter().position(|h| h == "index");
    let prop_cols = property_columns(edges, &headers)?;
    let mut next_index: BTreeMap<u64, u32> = BTreeMap::new();
    for (row_no, row) in rows.iter().enumerate() {
        let row_no = row_no + 1;
        let id = parse_id(edges, row_no, &row[id_col])?;
        let source = parse_id(edges, row_no, &row[source_col])?;
        let target = parse_id(edges, row_no, &row[target_col])?;
        let index = match index_col.map(|c| row[c].as_str()).filter(|s| !s.is_empty()) {
            Some(raw) => raw.parse::<u32>().map_err(|_| CliError::ImportRow {
                path: edges.to_path_buf(),
                row: row_no,
                message: format!("bad edge index {raw:?}"),
            })?,
            None => {
                let slot = next_index.entry(source).or_insert(0);
                let idx = *slot;
                *slot += 1;
                idx
            }
        };
        let properties = parse_properties(edges, row_no, row, &prop_cols)?;
        db.insert_edge(Edge::new(
            id,
            source,
            target,
            index,
            row[label_col].clone(),
            properties,
        ))
        .map_err(|e| CliError::ImportRow {
            path: edges.to_path_buf(),
            row: row_no,
            message: e.to_string(),
        })?;
    }

    // Graphs.
    if let Some(graphs) = graphs {
        let (headers, rows) = read_csv(graphs)?;
        let id_col = require_column(graphs, &headers, "id")?;
        let label_col = require_column(graphs, &headers, "label")?;
        let vertices_col = require_column(graphs, &headers, "vertices")?;
        let edges_col = require_column(graphs, &headers, "edges")?;
        let prop_cols = property_columns(graphs, &headers)?;
        for (row_no, row) in rows.iter().enumerate() {
            let row_no = row_no + 1;
            let id = parse_id(graphs, row_no, &row[id_col])?;
            let vertex_ids = parse_id_list(graphs, row_no, &row[vertices_col])?;
            let edge_ids = parse_id_list(graphs, row_no, &row[edges_col])?;
            let properties = parse_properties(graphs, row_no, row, &prop_cols)?;
            db.insert_graph(id, row[label_col].clone(), properties, vertex_ids, edge_ids)
                .map_err(|e| CliError::ImportRow {
                    path: graphs.to_path_buf(),
                    row: row_no,
                    message: e.to_string(),
                })?;
        }
    }

    store.put_database(&db)?;
    Ok(ImportReport {
        vertices: db.vertex_count(),
        edges: db.edge_count(),
        graphs: db.graph_count(),
        elapsed: started.elapsed(),
    })
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((headers, rows))
}

fn require_column(path: &Path, headers: &[String], name: &str) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Usage(format!("{}: missing column {name:?}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnType {
    Int,
    Float,
    Bool,
    Str,
}

/// `key:type` property columns.
fn property_columns(
    path: &Path,
    headers: &[String],
) -> Result<Vec<(usize, String, ColumnType)>, CliError> {
    let mut cols = Vec::new();
    for (i, header) in headers.iter().enumerate() {
        if let Some((key, ty)) = header.split_once(':') {
            let ty = match ty {
                "int64" => ColumnType::Int,
                "float64" => ColumnType::Float,
                "boolean" => ColumnType::Bool,
                "string" => ColumnType::Str,
                other => {
                    return Err(CliError::Usage(format!(
                        "{}: unknown column type {other:?} in header {header:?}",
                        path.display()
                    )))
                }
            };
            cols.push((i, key.to_string(), ty));
        }
    }
    Ok(cols)
}

fn parse_id(path: &Path, row: usize, raw: &str) -> Result<u64, CliError> {
    raw.trim().parse::<u64>().map_err(|_| CliError::ImportRow {
        path: path.to_path_buf(),
        row,
        message: format!("bad id {raw:?}"),
    })
}

fn parse_id_list(path: &Path, row: usize, raw: &str) -> Result<Vec<u64>, CliError> {
    raw.split_whitespace()
        .map(|part| parse_id(path, row, part))
        .collect()
}

fn parse_properties(
    path: &Path,
    row_no: usize,
    row: &[String],
    columns: &[(usize, String, ColumnType)],
) -> Result<Properties, CliError> {
    let mut properties = Properties::new();
    for (col, key, ty) in columns {
        let raw = &row[*col];
        if raw.is_empty() {
            continue;
        }
        let malformed = |detail: String| CliError::ImportRow {
            path: path.to_path_buf(),
            row: row_no,
            message: detail,
        };
        let value = match ty {
            ColumnType::Int => PropertyValue::Int(
                raw.parse()
                    .map_err(|_| malformed(format!("bad int64 cell {raw:?} under {key:?}")))?,
            ),
            ColumnType::Float => PropertyValue::Float(
                raw.parse()
                    .map_err(|_| malformed(format!("bad float64 cell {raw:?} under {key:?}")))?,
            ),
            ColumnType::Bool => match raw.as_str() {
                "true" => PropertyValue::Bool(true),
                "false" => PropertyValue::Bool(false),
                _ => return Err(malformed(format!("bad boolean cell {raw:?} under {key:?}"))),
            },
            ColumnType::Str => PropertyValue::Str(raw.clone()),
        };
        properties.set(key.clone(), value);
    }
    Ok(properties)
}

/// Write a database out as the CSV triple the importer reads; the format's
/// other half, used by dataset generation.
pub fn export_csv(db: &EpgmDatabase, dir: &Path) -> Result<(PathBuf, PathBuf, PathBuf), CliError> {
    use std::fmt::Write as _;

    // Collect the union of property keys per file, typed by first value.
    let column_plan = |items: Vec<(&String, &PropertyValue)>| -> Vec<(String, ColumnType)> {
        let mut plan: BTreeMap<String, ColumnType> = BTreeMap::new();
        for (key, value) in items {
            let ty = match value {
                PropertyValue::Int(_) => ColumnType::Int,
                PropertyValue::Float(_) => ColumnType::Float,
                PropertyValue::Bool(_) => ColumnType::Bool,
                PropertyValue::Str(_) => ColumnType::Str,
            };
            plan.entry(key.clone()).or_insert(ty);
        }
        plan.into_iter().collect()
    };
    let type_name = |ty: ColumnType| match ty {
        ColumnType::Int => "int64",
        ColumnType::Float => "float64",
        ColumnType::Bool => "boolean",
        ColumnType::Str => "string",
    };
    let render = |value: Option<&PropertyValue>| -> String {
        match value {
            None => String::new(),
            Some(PropertyValue::Float(f)) => format!("{f:?}"),
            Some(v) => v.to_string(),
        }
    };

    let vertices_path = dir.join("vertices.csv");
    let vertex_plan = column_plan(db.vertices().flat_map(|v| v.properties.iter()).collect());
    {
        let mut w = csv::Writer::from_path(&vertices_path)?;
        let mut header = vec!["id".to_string(), "label".to_string()];
        header.extend(
            vertex_plan
                .iter()
                .map(|(k, t)| format!("{k}:{}", type_name(*t))),
        );
        w.write_record(&header)?;
        for v in db.vertices() {
            let mut row = vec![v.id.to_string(), v.label.clone()];
            row.extend(vertex_plan.iter().map(|(k, _)| render(v.properties.get(k))));
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    let edges_path = dir.join("edges.csv");
    let edge_plan = column_plan(db.edges().flat_map(|e| e.properties.iter()).collect());
    {
        let mut w = csv::Writer::from_path(&edges_path)?;
        let mut header = vec![
            "id".to_string(),
            "source".to_string(),
            "target".to_string(),
            "index".to_string(),
            "label".to_string(),
        ];
        header.extend(
            edge_plan
                .iter()
                .map(|(k, t)| format!("{k}:{}", type_name(*t))),
        );
        w.write_record(&header)?;
        for e in db.edges() {
            let mut row = vec![
                e.id.to_string(),
                e.source.to_string(),
                e.target.to_string(),
                e.source_index.to_string(),
                e.label.clone(),
            ];
            row.extend(edge_plan.iter().map(|(k, _)| render(e.properties.get(k))));
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    let graphs_path = dir.join("graphs.csv");
    let graph_plan = column_plan(
        db.graph_entries()
            .flat_map(|g| g.properties.iter())
            .collect(),
    );
    {
        let mut w = csv::Writer::from_path(&graphs_path)?;
        let mut header = vec![
            "id".to_string(),
            "label".to_string(),
            "vertices".to_string(),
            "edges".to_string(),
        ];
        header.extend(
            graph_plan
                .iter()
                .map(|(k, t)| format!("{k}:{}", type_name(*t))),
        );
        w.write_record(&header)?;
        for g in db.graph_entries() {
            let mut vertex_list = String::new();
            for (i, id) in g.vertex_ids.iter().enumerate() {
                if i > 0 {
                    vertex_list.push(' ');
                }
                let _ = write!(vertex_list, "{id}");
            }
            let mut edge_list = String::new();
            for (i, id) in g.edge_ids.iter().enumerate() {
                if i > 0 {
                    edge_list.push(' ');
                }
                let _ = write!(edge_list, "{id}");
            }
            let mut row = vec![g.id.to_string(), g.label.clone(), vertex_list, edge_list];
            row.extend(graph_plan.iter().map(|(k, _)| render(g.properties.get(k))));
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    Ok((vertices_path, edges_path, graphs_path))
}

/// Snapshot helper shared by generate and tests.
pub fn write_json_dataset(db: &EpgmDatabase, labels: &[&str], path: &Path) -> Result<(), CliError> {
    let dataset = DatasetJson::from_database(db, labels);
    epgm_model::json::write_dataset(path, &dataset)?;
    Ok(())
}
