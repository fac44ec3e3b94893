//! `epgm` — import graph data into a partitioned store, generate seeded
//! datasets, run analytical workflow scripts, export graphs and report
//! store statistics.

mod error;
mod gen;
mod import;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use epgm_model::IdSource;
use epgm_store::{GraphStore, PartitionStrategy, StoreConfig};

use error::CliError;
use output::OutputFormat;

#[derive(Parser)]
#[command(
    name = "epgm",
    version,
    about = "Graph analytics over a partitioned wide-column store"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PartitionerKind {
    Hash,
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DatasetKind {
    Social,
    Business,
}

#[derive(Subcommand)]
enum Command {
    /// Bulk-load a dataset into a graph store.
    Import {
        #[arg(long, env = "EPGM_STORE")]
        store: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
        /// JSON dataset file (json format).
        #[arg(long)]
        file: Option<PathBuf>,
        /// CSV files (csv format).
        #[arg(long)]
        vertices: Option<PathBuf>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Partition count when creating a new store.
        #[arg(long, default_value_t = 1)]
        partitions: u16,
        #[arg(long, value_enum, default_value = "hash")]
        partitioner: PartitionerKind,
    },
    /// Generate a seeded synthetic dataset.
    Generate {
        #[arg(long, value_enum)]
        kind: DatasetKind,
        #[arg(long, default_value_t = 1)]
        scale: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory for dataset.json and metadata.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
    },
    /// Run a workflow script against a store.
    Run {
        #[arg(long, env = "EPGM_STORE")]
        store: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Write results under this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bindings to emit (default: the last graph or collection).
        #[arg(long)]
        emit: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Export a stored graph.
    Export {
        #[arg(long, env = "EPGM_STORE")]
        store: PathBuf,
        #[arg(long)]
        graph: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report store statistics.
    Stats {
        #[arg(long, env = "EPGM_STORE")]
        store: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn open_or_create(
    path: PathBuf,
    partitions: u16,
    partitioner: PartitionerKind,
) -> Result<GraphStore, CliError> {
    if path.join("meta").exists() {
        return Ok(GraphStore::open_existing(path)?);
    }
    let strategy = match partitioner {
        PartitionerKind::Hash => PartitionStrategy::Hash,
        PartitionerKind::Range => PartitionStrategy::default_range(partitions),
    };
    Ok(GraphStore::open(StoreConfig {
        path,
        partition_count: partitions,
        strategy,
        max_versions: 3,
        sync: epgm_store::SyncMode::Batched,
    })?)
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Import {
            store,
            format,
            file,
            vertices,
            edges,
            graphs,
            partitions,
            partitioner,
        } => {
            let mut store = open_or_create(store, partitions, partitioner)?;
            let report = match format {
                DataFormat::Json => {
                    let file = file.ok_or_else(|| {
                        CliError::Usage("json import needs --file <dataset.json>".to_string())
                    })?;
                    import::import_json(&mut store, &file)?
                }
                DataFormat::Csv => {
                    let vertices = vertices.ok_or_else(|| {
                        CliError::Usage("csv import needs --vertices <file>".to_string())
                    })?;
                    let edges = edges.ok_or_else(|| {
                        CliError::Usage("csv import needs --edges <file>".to_string())
                    })?;
                    import::import_csv(&mut store, &vertices, &edges, graphs.as_deref())?
                }
            };
            store.close()?;
            output::write_stdout(&format!(
                "imported {} vertices, {} edges, {} graphs in {:.3} s\n",
                report.vertices,
                report.edges,
                report.graphs,
                report.elapsed.as_secs_f64()
            ))?;
            Ok(())
        }
        Command::Generate {
            kind,
            scale,
            seed,
            out,
            format,
        } => {
            if scale == 0 {
                return Err(CliError::Usage("--scale must be positive".to_string()));
            }
            let (db, meta) = match kind {
                DatasetKind::Social => gen::social::generate(scale, seed),
                DatasetKind::Business => gen::business::generate(scale, seed),
            };
            std::fs::create_dir_all(&out)?;
            match format {
                DataFormat::Json => {
                    import::write_json_dataset(&db, &[], &out.join("dataset.json"))?;
                }
                DataFormat::Csv => {
                    import::export_csv(&db, &out)?;
                }
            }
            let meta_text = serde_json::to_string_pretty(&meta)? + "\n";
            std::fs::write(out.join("metadata.json"), meta_text)?;
            output::write_stdout(&format!(
                "generated {} dataset: {} vertices, {} edges (scale {scale}, seed {seed}) in {}\n",
                meta.kind,
                db.vertex_count(),
                db.edge_count(),
                out.display()
            ))?;
            Ok(())
        }
        Command::Run {
            store,
            script,
            out,
            emit,
            format,
        } => {
            let store = GraphStore::open_existing(store)?;
            let source = std::fs::read_to_string(&script)?;
            let outcome = run::run_workflow(&store, &source)?;
            run::print_timings(&outcome);
            for (name, value) in run::emitted_bindings(&outcome, &emit)? {
                run::emit(&name, value, format, out.as_deref())?;
            }
            Ok(())
        }
        Command::Export {
            store,
            graph,
            format,
            out,
        } => {
            let store = GraphStore::open_existing(store)?;
            let ids = IdSource::new();
            let loaded = store
                .load_graph(graph, None, &ids)?
                .ok_or_else(|| CliError::Other(format!("unknown graph id {graph}")))?;
            let value = epgm_grala::Value::Graph(loaded);
            let text = match format {
                OutputFormat::Json => output::value_to_json(&value)?,
                OutputFormat::Dot => output::value_to_dot(&format!("g{graph}"), &value)?,
            };
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => output::write_stdout(&text)?,
            }
            Ok(())
        }
        Command::Stats { store } => {
            let store = GraphStore::open_existing(store)?;
            let stats = store.stats()?;
            use std::fmt::Write as _;
            let mut text = String::new();
            let _ = writeln!(text, "vertices: {}", stats.vertices);
            let _ = writeln!(text, "edges:    {}", stats.edges);
            let _ = writeln!(text, "graphs:   {}", stats.graphs);
            let _ = writeln!(text, "partitions:");
            for (partition, count) in &stats.per_partition {
                let _ = writeln!(text, "  {partition:>5}: {count}");
            }
            let _ = writeln!(text, "labels:");
            for (label, count) in &stats.label_histogram {
                let _ = writeln!(text, "  {label}: {count}");
            }
            output::write_stdout(&text)?;
            Ok(())
        }
    }
}
