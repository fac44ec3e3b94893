//! Result emission: JSON in the dataset schema (re-importable) and DOT for
//! rendering.

use std::fmt::Write;

use epgm_grala::Value;
use epgm_model::json::DatasetJson;
use epgm_model::{GraphCollection, LogicalGraph};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Dot,
}

/// Write to stdout, exiting quietly when the reading end of a pipe has
/// gone away (`epgm stats | head`).
pub fn write_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut stdout = std::io::stdout();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(e.into()),
    }
}

pub fn value_to_json(value: &Value) -> Result<String, CliError> {
    let dataset = match value {
        Value::Graph(g) => DatasetJson::from_graph(g),
        Value::Collection(c) => {
            let graphs: Vec<LogicalGraph> = c.iter().cloned().collect();
            DatasetJson::from_graphs(&graphs)
        }
        other => {
            return Err(CliError::Other(format!(
                "cannot emit a {} as a dataset",
                other.kind()
            )))
        }
    };
    Ok(dataset.to_pretty_string()? + "\n")
}

pub fn value_to_dot(name: &str, value: &Value) -> Result<String, CliError> {
    match value {
        Value::Graph(g) => Ok(graph_to_dot(name, g)),
        Value::Collection(c) => Ok(collection_to_dot(name, c)),
        other => Err(CliError::Other(format!(
            "cannot render a {} as DOT",
            other.kind()
        ))),
    }
}

fn sanitize(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if cleaned.is_empty() {
        "g".to_string()
    } else {
        cleaned
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `label\n{key=value,…}` with the pieces escaped for a DOT string; the
/// `\n` is DOT's own line break.
fn node_label(label: &str, properties: &epgm_model::Properties) -> String {
    let mut parts = Vec::new();
    for (key, value) in properties.iter() {
        parts.push(format!("{}={}", escape(key), escape(&value.to_string())));
    }
    format!("{}\\n{{{}}}", escape(label), parts.join(","))
}

/// One node per vertex labeled `label\n{key=value,…}`, directed edges with
/// their labels.
pub fn graph_to_dot(name: &str, graph: &LogicalGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", sanitize(name));
    body_to_dot(&mut out, graph, "  ");
    let _ = writeln!(out, "}}");
    out
}

fn collection_to_dot(name: &str, collection: &GraphCollection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", sanitize(name));
    for (i, graph) in collection.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    label=\"graph {}\";", graph.id());
        body_to_dot(&mut out, graph, "    ");
        let _ = writeln!(out, "  }}");
    }
    let _ = writeln!(out, "}}");
    out
}

fn body_to_dot(out: &mut String, graph: &LogicalGraph, indent: &str) {
    for v in graph.vertices() {
        let _ = writeln!(
            out,
            "{indent}v{} [label=\"{}\"];",
            v.id,
            node_label(&v.label, &v.properties)
        );
    }
    for e in graph.edges() {
        let _ = writeln!(
            out,
            "{indent}v{} -> v{} [label=\"{}\"];",
            e.source,
            e.target,
            escape(&e.label)
        );
    }
}
