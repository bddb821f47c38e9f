//! Command-line behavior: artifacts, determinism and exit codes.

mod common;

use common::{read_tree, ref_transitions};
use promoscan::cli::run_in;
use promoscan::corpus::{Corpus, Safety};
use promoscan::netgraph::{LabeledGraph, NodeKind, Relation};
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_promoscan"))
}

fn synth_into(dir: &Path, seed: &str) -> std::path::PathBuf {
    run_in(dir, &["--seed", seed, "synth", "--preset", "tiny"]).unwrap();
    dir.join("corpus.json")
}

#[test]
fn pipeline_is_byte_identical_per_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        run_in(dir.path(), &["--seed", "7", "pipeline", "--preset", "tiny"]).unwrap();
    }
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    assert!(ta.len() > 20, "{} files", ta.len());
    assert_eq!(ta, tb);
    let c = tempfile::tempdir().unwrap();
    run_in(c.path(), &["--seed", "8", "pipeline", "--preset", "tiny"]).unwrap();
    assert_ne!(read_tree(c.path())["corpus.json"], ta["corpus.json"]);
}

#[test]
fn manifest_lists_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--seed", "3", "pipeline", "--preset", "tiny"]).unwrap();
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["command"], "pipeline");
    assert_eq!(doc["seed"], 3);
    let listed = doc["artifacts"].as_array().unwrap();
    let files = read_tree(dir.path());
    assert_eq!(listed.len() + 1, files.len());
    for a in listed {
        let name = a["name"].as_str().unwrap();
        assert_eq!(
            a["bytes"].as_u64().unwrap() as usize,
            files[name].len(),
            "{name}"
        );
    }
    assert_eq!(out.artifacts.len(), files.len());
}

#[test]
fn eval_single_view_gives_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_into(dir.path(), "4");
    let out = tempfile::tempdir().unwrap();
    run_in(
        out.path(),
        &[
            "eval",
            "--corpus",
            corpus.to_str().unwrap(),
            "--features",
            "video",
        ],
    )
    .unwrap();
    let grid = std::fs::read_to_string(out.path().join("eval_grid.tsv")).unwrap();
    let rows: Vec<&str> = grid.lines().skip(1).collect();
    assert_eq!(rows.len(), 3, "{grid}");
    assert!(rows.iter().all(|r| r.contains("Video-Level")));
}

fn parse_edges(corpus: &Corpus, text: &str) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for line in text.lines() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[2], "related");
        let label = |id: &str| {
            corpus
                .video(id)
                .and_then(|v| v.label)
                .unwrap_or(Safety::Safe)
        };
        let a = g.add_node(cols[0], NodeKind::Video, label(cols[0]));
        let b = g.add_node(cols[1], NodeKind::Video, label(cols[1]));
        g.add_edge(a, b, Relation::Related);
    }
    g
}

#[test]
fn video_graph_transitions_match_recount() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = synth_into(dir.path(), "5");
    let corpus = Corpus::from_json_str(&std::fs::read_to_string(&corpus_path).unwrap()).unwrap();
    let out = tempfile::tempdir().unwrap();
    run_in(
        out.path(),
        &[
            "graph",
            "--kind",
            "video",
            "--corpus",
            corpus_path.to_str().unwrap(),
        ],
    )
    .unwrap();
    let edges = std::fs::read_to_string(out.path().join("graph_video.edges")).unwrap();
    let g = parse_edges(&corpus, &edges);
    let t = ref_transitions(&g);
    let table = std::fs::read_to_string(out.path().join("transitions_video.tsv")).unwrap();
    let counts: Vec<usize> = table
        .lines()
        .skip(1)
        .map(|l| l.rsplit('\t').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, t);
    assert_eq!(counts.iter().sum::<usize>(), g.edge_count());
}

#[test]
fn inputs_are_never_modified() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synth_into(dir.path(), "6");
    let before = std::fs::read(&corpus).unwrap();
    let out = tempfile::tempdir().unwrap();
    run_in(
        out.path(),
        &["report", "--corpus", corpus.to_str().unwrap()],
    )
    .unwrap();
    assert_eq!(std::fs::read(&corpus).unwrap(), before);
}

fn exit_of(args: &[&str], out: &Path) -> (i32, String) {
    let o = bin().args(args).arg("--out").arg(out).output().unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let corpus = synth_into(dir.path(), "1");
    let corpus = corpus.to_str().unwrap();

    assert_eq!(exit_of(&["synth", "--preset", "tiny"], &out).0, 0);
    assert_eq!(exit_of(&["frobnicate"], &out).0, 2);
    assert_eq!(exit_of(&["synth", "--preset", "huge"], &out).0, 4);
    let (code, err) = exit_of(
        &["graph", "--kind", "video", "--th", "0", "--corpus", corpus],
        &out,
    );
    assert_eq!(code, 4);
    assert!(err.contains("module=netgraph"), "{err}");

    let (code, err) = exit_of(&["extract", "--corpus", "/nonexistent/c.json"], &out);
    assert_eq!(code, 3);
    assert!(err.contains("module=corpus"), "{err}");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format_version\": 1, \"videos\": [").unwrap();
    let (code, err) = exit_of(&["extract", "--corpus", bad.to_str().unwrap()], &out);
    assert_eq!(code, 3);
    assert!(err.contains("bad.json"), "{err}");
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["synth", "--preset", "tiny"])
        .env("PROMOSCAN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("corpus.json").exists());
}
