use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_spectral-abstraction");

const BRIDGED: &str = "a\tb\t1\na\tc\t1\nb\tc\t1\nc\td\t1\nd\te\t1\nd\tf\t1\ne\tf\t1\n";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn spectrum_writes_scree_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p3.tsv", "a\tb\t1\nb\tc\t1\n");
    let out = dir.path().join("spectrum.json");
    assert!(run(&["spectrum", "--input", s(&input), "--output", s(&out)]).status.success());
    let scree = fs::read_to_string(dir.path().join("spectrum.scree.csv")).unwrap();
    let mut lines = scree.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let rows: Vec<(usize, f64)> = lines
        .map(|l| {
            let (i, v) = l.split_once(',').unwrap();
            (i.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    let expected = [(1, 0.0), (2, 1.0), (3, 3.0)];
    assert_eq!(rows.len(), 3);
    for ((i, v), (ei, ev)) in rows.iter().zip(expected) {
        assert_eq!(*i, ei);
        assert!((v - ev).abs() < 1e-9);
    }
    let report = json(&out);
    assert_eq!(report["eigenvectors"].as_array().unwrap().len(), 3);
}

#[test]
fn cluster_separates_bridged_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bt.tsv", BRIDGED);
    for method in ["recursive", "kway"] {
        let out = dir.path().join(format!("{method}.json"));
        let o = run(&["cluster", "--input", s(&input), "--output", s(&out), "--k", "2", "--method", method]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let report = json(&out);
        assert_eq!(report["assignment"], serde_json::json!([0, 0, 0, 1, 1, 1]));
        assert_eq!(report["metrics"]["cut_weight"], 1.0);
    }
}

#[test]
fn fit_recovers_predicted_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let mut tsv = String::new();
    let g = spectral_abstraction::graph::sbm_generate(3, 10, 0.7, 0.1, 11).unwrap();
    for e in g.edges() {
        tsv.push_str(&format!("{}\t{}\t{}\n", g.labels()[e.u], g.labels()[e.v], e.weight));
    }
    let input = write(dir.path(), "sbm.tsv", &tsv);
    let fc = dir.path().join("fc.csv");
    let args = ["predict-fc", "--input", s(&input), "--output", s(&fc), "--beta", "1.3", "--scale", "2", "--offset", "0.1"];
    assert!(run(&args).status.success());
    let report = dir.path().join("fit.json");
    assert!(run(&["fit-fc", "--input", s(&input), "--observed", s(&fc), "--output", s(&report)]).status.success());
    let r = json(&report);
    assert!((r["beta"].as_f64().unwrap() - 1.3).abs() < 1e-3);
    assert!(r["frobenius_error"].as_f64().unwrap() < 1e-8);
    assert!((r["spectra_similarity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn hierarchy_writes_dot_alongside() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bt.tsv", BRIDGED);
    let out = dir.path().join("h.json");
    let o = run(&["hierarchy", "--input", s(&input), "--output", s(&out), "--level", "k=2", "--level", "k=1", "--dot"]);
    assert!(o.status.success());
    let h = json(&out);
    assert_eq!(h["levels"][0]["quotient_edges"], serde_json::json!([[0, 1, 1.0]]));
    assert_eq!(h["levels"][1]["profile"][0]["separation"], "inf");
    assert!(fs::read_to_string(dir.path().join("h.dot")).unwrap().starts_with("graph hierarchy {"));
}

#[test]
fn jacobian_graph_reports_largest_component() {
    let dir = tempfile::tempdir().unwrap();
    let couplings = write(dir.path(), "j.csv", "0,1,1,0,0\n1,0,1,0,0\n1,1,0,0,0\n0,0,0,0,1\n0,0,0,1,0\n");
    let out = dir.path().join("j.json");
    assert!(run(&["jacobian-graph", "--input", s(&couplings), "--mask", s(&couplings), "--output", s(&out)])
        .status
        .success());
    assert_eq!(json(&out)["largest_component"], serde_json::json!([0, 1, 2]));
}

#[test]
fn failures_emit_json_and_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let looped = write(dir.path(), "loop.tsv", "a\ta\t1\n");
    let out = dir.path().join("out.json");
    let o = run(&["spectrum", "--input", s(&looped), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "SelfLoop");
    assert!(err["detail"].as_str().unwrap().contains("line 1"));
    assert!(!out.exists());
    assert!(!dir.path().join("out.scree.csv").exists());

    let bt = write(dir.path(), "bt.tsv", BRIDGED);
    let o = run(&["cluster", "--input", s(&bt), "--output", s(&out), "--k", "7"]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stderr).unwrap()["error"], "KOutOfRange");
    let o = run(&["hierarchy", "--input", s(&bt), "--output", s(&out), "--level", "k=2", "--level", "k=3"]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stderr).unwrap()["error"], "SpecMonotonicityViolation");
    let o = run(&["cluster", "--input", s(&bt)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stderr).unwrap()["error"], "UsageError");
    let asym = write(dir.path(), "asym.csv", "0,1\n2,0\n");
    let o = run(&["bipartition", "--input", s(&asym), "--output", s(&out)]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stderr).unwrap()["error"], "AsymmetricMatrix");
    assert!(!out.exists());
    let o = Command::new(BIN)
        .args(["spectrum", "--input", s(&bt), "--output", s(&out)])
        .env("SPECTRAL_ABSTRACTION_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
