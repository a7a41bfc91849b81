mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use adahaar::graphs::GraphJson;
use common::*;
use tempfile::TempDir;

fn adahaar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adahaar"))
        .args(args)
        .env("ADAHAAR_SEED", "0")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_example2(dir: &Path) -> PathBuf {
    let out = dir.join("build");
    let o = adahaar(&[
        "build",
        "--chain-x",
        s(&fixture("example1_chain_x.json")),
        "--chain-y",
        s(&fixture("example2_chain_y.json")),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn weights_of(path: &Path) -> Vec<Vec<f64>> {
    let g = adahaar::io::read_json::<GraphJson>(path)
        .unwrap()
        .into_graph()
        .unwrap();
    (0..g.len())
        .map(|u| (0..g.len()).map(|v| g.weight(u, v)).collect())
        .collect()
}

#[test]
fn symmetrize_writes_both_graphs() {
    let dir = TempDir::new().unwrap();
    let o = adahaar(&[
        "symmetrize",
        s(&fixture("example2_digraph.json")),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("weakly connected: true"));
    let gx = weights_of(&dir.path().join("gx.json"));
    let gy = weights_of(&dir.path().join("gy.json"));
    for u in 0..6 {
        assert_eq!(gx[u], EXAMPLE1_W[u].to_vec());
        assert_eq!(gy[u], EXAMPLE2_WY[u].to_vec());
    }
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ \"labels\": [").unwrap();
    let o = adahaar(&["symmetrize", s(&bad), "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
    let o = adahaar(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&adahaar(&["verify", s(&missing)])), 2);
}

#[test]
fn tampered_chain_exits_three() {
    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(fixture("example1_chain_x.json")).unwrap();
    assert!(text.contains("[1, 1, 6]"));
    let bad = dir.path().join("chain.json");
    fs::write(&bad, text.replace("[1, 1, 6]", "[1, 1, 7]")).unwrap();
    let o = adahaar(&[
        "chain",
        "--explicit",
        s(&bad),
        "--out",
        s(&dir.path().join("c.json")),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let o = adahaar(&[
        "build",
        "--chain-x",
        s(&bad),
        "--out",
        s(&dir.path().join("b")),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn chain_from_explicit_clusters_matches_fixture() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cx.json");
    let o = adahaar(&[
        "chain",
        s(&fixture("example1_graph.json")),
        "--clusters",
        s(&fixture("gx_clusters.json")),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        fs::read_to_string(fixture("example1_chain_x.json")).unwrap()
    );
}

#[test]
fn greedy_chain_respects_targets_and_depth() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.json");
    let o = adahaar(&[
        "chain",
        s(&fixture("example1_graph.json")),
        "--target-per-level",
        "3,2",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("6 -> 3 -> 2 -> 1"));
    let o = adahaar(&[
        "chain",
        s(&fixture("example1_graph.json")),
        "--depth",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("6 -> 1"));
}

#[test]
fn build_reports_counts() {
    let dir = TempDir::new().unwrap();
    let out = build_example2(dir.path());
    let counts: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("counts.json")).unwrap()).unwrap();
    assert_eq!(counts["depth"], 3);
    assert_eq!(counts["full"]["total"], 95);
    assert_eq!(counts["full"]["per_level"], serde_json::json!([6, 8, 80]));
    assert_eq!(counts["restricted"]["total"], 39);
    assert_eq!(counts["pruned"]["total"], 20);
    assert_eq!(counts["frame_bounds"]["pruned"]["rank"], 6);
    let lower = counts["frame_bounds"]["restricted"]["lower"]
        .as_f64()
        .unwrap();
    assert!((lower - 1.0).abs() < 1e-9);
    for f in [
        "partition.json",
        "vertex_blocks.json",
        "system_full.json",
        "system_restricted.json",
        "system_pruned.json",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
}

#[test]
fn build_twice_is_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (da, db) = (build_example2(a.path()), build_example2(b.path()));
    let mut names: Vec<_> = fs::read_dir(&da)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for name in names {
        assert_eq!(
            fs::read(da.join(&name)).unwrap(),
            fs::read(db.join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn analyze_then_synthesize_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = build_example2(dir.path());
    let signal = dir.path().join("signal.csv");
    fs::write(
        &signal,
        "vertex_label,value\na,1.5\nb,-2\nc,0.25\nd,3\ne,-0.5\nf,1\n",
    )
    .unwrap();
    let coeffs = dir.path().join("coeffs.csv");
    let back = dir.path().join("back.csv");
    let system = out.join("system_restricted.json");
    let o = adahaar(&[
        "analyze",
        s(&signal),
        "--system",
        s(&system),
        "--out",
        s(&coeffs),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let coeff_text = fs::read_to_string(&coeffs).unwrap();
    assert!(coeff_text.starts_with("level,parent_id,l1,l2,value\n-1,0,0,0,"));
    // header, φ0 row, 38 atoms
    assert_eq!(coeff_text.lines().count(), 40);
    let o = adahaar(&[
        "synthesize",
        s(&coeffs),
        "--system",
        s(&system),
        "--out",
        s(&back),
    ]);
    assert_eq!(code(&o), 0);
    let rows = adahaar::io::read_signal_csv(&back).unwrap();
    let want = [
        ("a", 1.5),
        ("b", -2.0),
        ("c", 0.25),
        ("d", 3.0),
        ("e", -0.5),
        ("f", 1.0),
    ];
    assert_eq!(rows.len(), 6);
    for (label, v) in want {
        let got = rows.iter().find(|(l, _)| l == label).unwrap().1;
        assert!((got - v).abs() < 1e-10, "{label}: {got}");
    }
}

#[test]
fn indicator_touches_only_atoms_meeting_its_block() {
    let dir = TempDir::new().unwrap();
    let out = build_example2(dir.path());
    let signal = dir.path().join("f.csv");
    fs::write(&signal, "f,1\n").unwrap();
    // missing vertices are an error; supply zeros for the rest
    let o = adahaar(&[
        "analyze",
        s(&signal),
        "--system",
        s(&out.join("system_full.json")),
    ]);
    assert_eq!(code(&o), 3);
    fs::write(&signal, "a,0\nb,0\nc,0\nd,0\ne,0\nf,1\n").unwrap();
    let o = adahaar(&[
        "analyze",
        s(&signal),
        "--system",
        s(&out.join("system_full.json")),
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let e = example2_embedding();
    let bf = e.partition.block(e.vertex_blocks.blocks()[5]);
    let mut nonzero = 0;
    for line in text.lines().skip(2) {
        let parts: Vec<&str> = line.split(',').collect();
        let value: f64 = parts[4].parse().unwrap();
        if value != 0.0 {
            nonzero += 1;
            let parent: usize = parts[1].parse().unwrap();
            let parent = e.partition.block(adahaar::hierarchy::BlockId(parent));
            assert!(parent.meets(bf), "{line}");
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn verify_golden_systems_and_a_deletion() {
    let dir = TempDir::new().unwrap();
    let out = build_example2(dir.path());
    for name in ["system_full.json", "system_restricted.json"] {
        let o = adahaar(&["verify", s(&out.join(name)), "--signals", "20"]);
        assert_eq!(
            code(&o),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
    let one_d = dir.path().join("one_d");
    assert_eq!(
        code(&adahaar(&[
            "build",
            "--chain-x",
            s(&fixture("example1_chain_x.json")),
            "--out",
            s(&one_d)
        ])),
        0
    );
    assert_eq!(
        code(&adahaar(&["verify", s(&one_d.join("system_full.json"))])),
        0
    );
    let dy = dir.path().join("dyadic");
    assert_eq!(
        code(&adahaar(&[
            "build",
            "--dyadic",
            "2",
            "--depth",
            "3",
            "--out",
            s(&dy)
        ])),
        0
    );
    assert_eq!(
        code(&adahaar(&["verify", s(&dy.join("system_full.json"))])),
        0
    );

    let mut file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("system_restricted.json")).unwrap())
            .unwrap();
    file["atoms"].as_array_mut().unwrap().remove(10);
    let deleted = dir.path().join("deleted.json");
    fs::write(&deleted, serde_json::to_string(&file).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let o = adahaar(&["verify", s(&deleted), "--out", s(&report)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL parseval"));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["seed"], 0);
}

#[test]
fn verify_reports_are_seeded() {
    let dir = TempDir::new().unwrap();
    let dy = dir.path().join("dyadic");
    assert_eq!(
        code(&adahaar(&[
            "build",
            "--dyadic",
            "1",
            "--depth",
            "4",
            "--out",
            s(&dy)
        ])),
        0
    );
    let run = |seed: &str, out: &Path| {
        let o = Command::new(env!("CARGO_BIN_EXE_adahaar"))
            .args(["verify", s(&dy.join("system_full.json")), "--out", s(out)])
            .env("ADAHAAR_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        fs::read(out).unwrap()
    };
    let a = run("7", &dir.path().join("a.json"));
    let b = run("7", &dir.path().join("b.json"));
    let c = run("8", &dir.path().join("c.json"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let o = Command::new(env!("CARGO_BIN_EXE_adahaar"))
        .args(["verify", s(&dy.join("system_full.json"))])
        .env("ADAHAAR_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn depth_zero_keeps_only_the_scaling_function() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d0");
    let o = adahaar(&["build", "--dyadic", "2", "--depth", "0", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("system_full.json")).unwrap()).unwrap();
    assert_eq!(file["atoms"].as_array().unwrap().len(), 0);
    assert_eq!(
        code(&adahaar(&["verify", s(&out.join("system_full.json"))])),
        0
    );
}
