use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tokaut::graph::Graph;

fn tokaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tokaut")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_lines(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn build(dir: &Path, graph: &str, k: usize) -> std::path::PathBuf {
    let out = dir.join(format!("{}_{k}.el", graph.replace([':', ',', '+', '/', '.'], "_")));
    let o = tokaut(&["build", "--graph", graph, "--k", &k.to_string(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn aut_order(path: &Path) -> String {
    let o = tokaut(&["aut", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    json_lines(&stdout(&o))[0]["order"].as_str().unwrap().to_string()
}

#[test]
fn build_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let f = build(dir.path(), "kmn:2,2", 2);
    let g = Graph::parse_edge_list(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!((g.n(), g.edge_count()), (6, 8));
    let f = build(dir.path(), "cube:3", 2);
    let g = Graph::parse_edge_list(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(g.n(), 28);
}

#[test]
fn build_writes_sidecar_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = build(dir.path(), "kmn:2,3", 2);
    let text = fs::read_to_string(&f).unwrap();
    assert!(text.starts_with('#'));
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let g = Graph::parse_edge_list(&text).unwrap();
    assert_eq!(g.to_edge_list(), body);
    let map = fs::read_to_string(format!("{}.map", f.display())).unwrap();
    assert_eq!(map.lines().count(), 10);
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| !n.ends_with(".el") && !n.ends_with(".map"))
        .collect();
    assert!(leftovers.is_empty(), "temporary files left behind: {leftovers:?}");
}

#[test]
fn k_one_is_the_base_graph() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("g.el");
    fs::write(&src, "n 5\n0 1\n1 2\n2 3\n3 4\n0 2\n").unwrap();
    let spec = format!("file:{}", src.display());
    let f = build(dir.path(), &spec, 1);
    let g = Graph::parse_edge_list(&fs::read_to_string(&f).unwrap()).unwrap();
    let h = Graph::parse_edge_list(&fs::read_to_string(&src).unwrap()).unwrap();
    assert!(tokaut::graph::is_isomorphic(&g, &h).is_some());
    assert_eq!(g.edges(), h.edges());
}

#[test]
fn aut_orders() {
    let dir = tempfile::tempdir().unwrap();
    let k34 = dir.path().join("k34.el");
    fs::write(&k34, tokaut::graph::complete_bipartite(tokaut::BipartiteSpec::new(3, 4)).unwrap().to_edge_list()).unwrap();
    assert_eq!(aut_order(&k34), "144");
    let c5 = dir.path().join("c5.el");
    fs::write(&c5, "n 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    assert_eq!(aut_order(&c5), "10");
    let f = build(dir.path(), "kmn:1,3", 2);
    assert_eq!(aut_order(&f), "12");
}

#[test]
fn aut_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("aut.jsonl");
    let o = tokaut(&["aut", "--graph", "cube:3", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 48"));
    let rows = json_lines(&fs::read_to_string(&report).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["order"], "48");
    assert_eq!(rows[0]["exhaustive_recount"], true);
}

#[test]
fn verify_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("b.jsonl");
    let o = tokaut(&[
        "verify", "bipartite", "--m", "2,3", "--n", "3", "--k", "2", "--jobs", "2", "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json_lines(&fs::read_to_string(&report).unwrap());
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert_eq!(rows[0]["computed_order"], "48");
    assert_eq!(rows[1]["computed_order"], "72");

    let o = tokaut(&["verify", "cube", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&stdout(&o))[0]["computed_order"], "192");

    let o = tokaut(&["verify", "product", "--factors", "k2+path:3", "--factors", "k2+cycle:5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_lines(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["generated_order"], "40");
}

#[test]
fn generators_and_factor() {
    let o = tokaut(&["generators", "bipartite", "--m", "2", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());

    let dir = tempfile::tempdir().unwrap();
    let o = tokaut(&["factor", "--graph", "prod:cycle:5+path:3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rep = &json_lines(&stdout(&o))[0];
    assert_eq!(rep["prime"], false);
    assert_eq!(rep["factors"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("factor_1.el").exists() && dir.path().join("factor_2.el").exists());
}

#[test]
fn exit_codes() {
    let o = tokaut(&["aut", "--graph", "wheel:5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kmn:M,N"));
    assert_eq!(tokaut(&["build", "--graph", "kn:4", "--k", "4", "--out", "/dev/null"]).status.code(), Some(2));
    assert_eq!(tokaut(&["verify"]).status.code(), Some(2));
    assert_eq!(tokaut(&["verify", "cube", "--r", "5"]).status.code(), Some(3));
    assert_eq!(tokaut(&["aut", "--graph", "cube:4", "--max-nodes", "1"]).status.code(), Some(3));
    assert_eq!(tokaut(&["--help"]).status.code(), Some(0));
}
