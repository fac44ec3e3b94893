//! End-to-end checks of the `epgm` binary: import, generate, run, export
//! and stats, including exit codes and diagnostics.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn epgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epgm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
        .display()
        .to_string()
}

fn script(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scripts")
        .join(file)
        .display()
        .to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

#[test]
fn import_json_then_stats() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
        "--partitions",
        "4",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("imported 11 vertices, 24 edges, 3 graphs"));

    let out = epgm(&["stats", "--store", &store]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices: 11"));
    assert!(text.contains("edges:    24"));
    assert!(text.contains("graphs:   3"));
    // Partition counts sum to the vertex count.
    let partition_total: usize = text
        .lines()
        .skip_while(|l| !l.starts_with("partitions:"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .filter_map(|l| l.rsplit(' ').next()?.parse::<usize>().ok())
        .sum();
    assert_eq!(partition_total, 11);
}

#[test]
fn import_csv_matches_json_import() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--format",
        "csv",
        "--vertices",
        &data("example_social_vertices.csv"),
        "--edges",
        &data("example_social_edges.csv"),
        "--graphs",
        &data("example_social_graphs.csv"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("imported 11 vertices, 24 edges, 3 graphs"));

    // The loaded database matches the canonical fixture.
    let loaded = epgm_store::GraphStore::open_existing(dir.path().join("store"))
        .unwrap()
        .load_database()
        .unwrap();
    let fixture = epgm_model::fixtures::example_db();
    assert_eq!(loaded.vertex_count(), fixture.vertex_count());
    for v in fixture.vertices() {
        let other = loaded.vertex(v.id).unwrap();
        assert_eq!(v.label, other.label);
        assert_eq!(v.properties, other.properties);
        assert_eq!(v.graph_ids, other.graph_ids);
    }
}

#[test]
fn import_reports_dangling_edges_with_row_numbers() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let vertices = dir.path().join("v.csv");
    let edges = dir.path().join("e.csv");
    std::fs::write(&vertices, "id,label\n0,Person\n").unwrap();
    std::fs::write(&edges, "id,source,target,label\n0,0,7,knows\n").unwrap();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--format",
        "csv",
        "--vertices",
        &vertices.display().to_string(),
        "--edges",
        &edges.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(text.contains("e.csv:1"), "missing row diagnostics: {text}");
    assert!(text.contains('7'), "missing endpoint id: {text}");
}

#[test]
fn import_accepts_empty_edge_files() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let vertices = dir.path().join("v.csv");
    let edges = dir.path().join("e.csv");
    std::fs::write(&vertices, "id,label\n0,Person\n").unwrap();
    std::fs::write(&edges, "id,source,target,label\n").unwrap();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--format",
        "csv",
        "--vertices",
        &vertices.display().to_string(),
        "--edges",
        &edges.display().to_string(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("imported 1 vertices, 0 edges, 0 graphs"));
}

#[test]
fn import_rejects_malformed_typed_cells() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let vertices = dir.path().join("v.csv");
    let edges = dir.path().join("e.csv");
    std::fs::write(&vertices, "id,label,age:int64\n0,Person,old\n").unwrap();
    std::fs::write(&edges, "id,source,target,label\n").unwrap();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--format",
        "csv",
        "--vertices",
        &vertices.display().to_string(),
        "--edges",
        &edges.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad int64 cell"));
}

#[test]
fn generate_is_seed_deterministic() {
    let dir = tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = epgm(&[
            "generate",
            "--kind",
            "social",
            "--scale",
            "1",
            "--seed",
            "7",
            "--out",
            &out_dir.display().to_string(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let a = std::fs::read(out_a.join("dataset.json")).unwrap();
    let b = std::fs::read(out_b.join("dataset.json")).unwrap();
    assert_eq!(a, b);
    let meta_a = std::fs::read(out_a.join("metadata.json")).unwrap();
    let meta_b = std::fs::read(out_b.join("metadata.json")).unwrap();
    assert_eq!(meta_a, meta_b);
}

#[test]
fn run_emits_the_last_result_binding() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
    ]);
    assert!(out.status.success());

    let out = epgm(&[
        "run",
        "--store",
        &store,
        "--script",
        &script("aggregate_vertex_count.grala"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    // Timings on stderr, one line per statement.
    let timing_lines = stderr(&out).lines().filter(|l| l.contains(" us  ")).count();
    assert_eq!(timing_lines, 2);
    // The emitted dataset carries the aggregated property.
    let emitted: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(emitted["graphs"][0]["properties"]["vertexCount"], 3);
}

#[test]
fn run_writes_named_bindings_to_the_out_dir() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
    ]);
    let out_dir = dir.path().join("results");
    let out = epgm(&[
        "run",
        "--store",
        &store,
        "--script",
        &script("select_communities.grala"),
        "--emit",
        "result1",
        "--emit",
        "result2",
        "--out",
        &out_dir.display().to_string(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for file in ["result1.json", "result2.json"] {
        let text = std::fs::read_to_string(out_dir.join(file)).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["graphs"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn run_rejects_bad_scripts_with_exit_2() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
    ]);
    let bad = dir.path().join("bad.grala");
    std::fs::write(&bad, "x = collection.select(").unwrap();
    let out = epgm(&[
        "run",
        "--store",
        &store,
        "--script",
        &bad.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));

    // Runtime failures exit 1.
    let boom = dir.path().join("boom.grala");
    std::fs::write(&boom, "x = db.G.frobnicate()").unwrap();
    let out = epgm(&[
        "run",
        "--store",
        &store,
        "--script",
        &boom.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_round_trips_json_and_renders_dot() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
    ]);

    let out = epgm(&["export", "--store", &store, "--graph", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let reloaded = epgm_model::json::parse_dataset(&stdout(&out))
        .unwrap()
        .into_database()
        .unwrap();
    assert_eq!(reloaded.vertex_count(), 3);
    assert_eq!(reloaded.edge_count(), 4);

    let out = epgm(&[
        "export", "--store", &store, "--graph", "0", "--format", "dot",
    ]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.contains("digraph"));
    assert!(dot.contains("v0 ->"));

    let out = epgm(&["export", "--store", &store, "--graph", "99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown graph id 99"));
}

#[test]
fn stats_on_an_empty_store_is_all_zeros() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"vertices": [], "edges": []}"#).unwrap();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &empty.display().to_string(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = epgm(&["stats", "--store", &store]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices: 0"));
    assert!(text.contains("edges:    0"));
    assert!(text.contains("graphs:   0"));
}

#[test]
fn usage_errors_exit_2() {
    let out = epgm(&["import"]);
    assert_eq!(out.status.code(), Some(2));
    let out = epgm(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn epgm_store_env_var_is_the_default_store_path() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store");
    let out = Command::new(env!("CARGO_BIN_EXE_epgm"))
        .env("EPGM_STORE", &store)
        .args(["import", "--file", &data("example_social.json")])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let out = Command::new(env!("CARGO_BIN_EXE_epgm"))
        .env("EPGM_STORE", &store)
        .args(["stats"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("vertices: 11"));
}

#[test]
fn generate_csv_datasets_are_importable() {
    let dir = tempdir().unwrap();
    let gen_dir = dir.path().join("gen");
    let out = epgm(&[
        "generate",
        "--kind",
        "business",
        "--scale",
        "1",
        "--seed",
        "5",
        "--out",
        &gen_dir.display().to_string(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let store = dir.path().join("store").display().to_string();
    let out = epgm(&[
        "import",
        "--store",
        &store,
        "--format",
        "csv",
        "--vertices",
        &gen_dir.join("vertices.csv").display().to_string(),
        "--edges",
        &gen_dir.join("edges.csv").display().to_string(),
        "--graphs",
        &gen_dir.join("graphs.csv").display().to_string(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stats = epgm(&["stats", "--store", &store]);
    assert!(stdout(&stats).contains("SalesInvoice"));
}

#[test]
fn run_renders_a_summarized_graph_as_dot() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("store").display().to_string();
    epgm(&[
        "import",
        "--store",
        &store,
        "--file",
        &data("example_social.json"),
    ]);
    let out = epgm(&[
        "run",
        "--store",
        &store,
        "--script",
        &script("summarized_communities.grala"),
        "--format",
        "dot",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    // One node per detected community, each carrying its member count.
    let nodes = dot.lines().filter(|l| l.contains("count=")).count();
    assert!(nodes >= 1);
}
