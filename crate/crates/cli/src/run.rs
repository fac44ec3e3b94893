//! Workflow execution: load the database out of the store, bind the dataset
//! aliases, evaluate the script statement by statement and emit results.

use std::path::Path;
use std::rc::Rc;

use epgm_algorithms::AlgorithmRegistry;
use epgm_grala::{run_script, RunOutcome, Value};
use epgm_store::GraphStore;

use crate::error::CliError;
use crate::output::{value_to_dot, value_to_json, write_stdout, OutputFormat};

/// Run a script against a store's database. Besides `db`, the aliases `sng`
/// and `iig` are bound to the full database graph so the shipped workflows
/// run unchanged.
pub fn run_workflow(store: &GraphStore, source: &str) -> Result<RunOutcome, CliError> {
    let db = Rc::new(store.load_database()?);
    let registry = Rc::new(AlgorithmRegistry::new());
    let database_graph = db.database_graph();
    let outcome = run_script(
        source,
        db,
        registry,
        vec![
            ("sng".to_string(), Value::Graph(database_graph.clone())),
            ("iig".to_string(), Value::Graph(database_graph)),
        ],
    )?;
    Ok(outcome)
}

pub fn print_timings(outcome: &RunOutcome) {
    for (i, timing) in outcome.timings.iter().enumerate() {
        let statement: String = if timing.statement.len() > 72 {
            format!("{}...", &timing.statement[..69])
        } else {
            timing.statement.clone()
        };
        let statement = statement.replace('\n', " ");
        eprintln!(
            "[{:>2}] {:>10} us  {}",
            i + 1,
            timing.duration.as_micros(),
            statement
        );
    }
}

/// Pick what to emit: explicitly requested bindings, or the last statement's
/// graph/collection value.
pub fn emitted_bindings<'a>(
    outcome: &'a RunOutcome,
    requested: &[String],
) -> Result<Vec<(String, &'a Value)>, CliError> {
    if !requested.is_empty() {
        let mut out = Vec::new();
        for name in requested {
            let value = outcome
                .bindings
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v)
                .ok_or_else(|| CliError::Usage(format!("no binding named {name:?} to emit")))?;
            out.push((name.clone(), value));
        }
        return Ok(out);
    }
    // Default: the last graph- or collection-valued binding.
    let last = outcome
        .bindings
        .iter()
        .rev()
        .find(|(_, v)| matches!(v, Value::Graph(_) | Value::Collection(_)));
    Ok(last.map(|(n, v)| (n.clone(), v)).into_iter().collect())
}

pub fn emit(
    name: &str,
    value: &Value,
    format: OutputFormat,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let (text, extension) = match format {
        OutputFormat::Json => (value_to_json(value)?, "json"),
        OutputFormat::Dot => (value_to_dot(name, value)?, "dot"),
    };
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{name}.{extension}")), text)?;
        }
        None => write_stdout(&text)?,
    }
    Ok(())
}
