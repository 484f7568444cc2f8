use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn circuit(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../circuits")
        .join(name)
}

fn stabzx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabzx"))
        .args(args)
        .output()
        .expect("run stabzx")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn propagate_bell_zz() {
    let out = stabzx(&["propagate", path(&circuit("bell.qc")), "+ZZ"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-YY\n");
}

#[test]
fn propagate_accepts_negative_strings() {
    let out = stabzx(&["propagate", path(&circuit("bell.qc")), "-YY"]);
    assert_eq!(stdout(&out), "-XZ\n");
}

#[test]
fn propagate_through_empty_circuit() {
    let out = stabzx(&["propagate", path(&circuit("empty.qc")), "+X"]);
    assert_eq!(stdout(&out), "+X\n");
}

#[test]
fn propagate_ghz_with_check() {
    let out = stabzx(&["propagate", path(&circuit("ghz3.qc")), "+ZII", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "+XXX\n");
}

#[test]
fn random_order_gives_the_same_answer() {
    for seed in ["1", "2", "3"] {
        let out = stabzx(&[
            "propagate",
            path(&circuit("ghz3.qc")),
            "-iYZX",
            "--random-order",
            "--seed",
            seed,
        ]);
        let inorder = stabzx(&["propagate", path(&circuit("ghz3.qc")), "-iYZX"]);
        assert_eq!(stdout(&out), stdout(&inorder));
    }
}

#[test]
fn propagate_writes_trace_lines() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let out = stabzx(&[
        "propagate",
        path(&circuit("bell.qc")),
        "+ZZ",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(trace).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["rule"], "H1");
    assert_eq!(lines[1]["rule"], "R8");
    assert_eq!(lines[1]["phase"], "-");
}

#[test]
fn parse_errors_exit_two() {
    let out = stabzx(&["propagate", path(&circuit("bell.qc")), "+ZW"]);
    assert_eq!(out.status.code(), Some(2));
    let out = stabzx(&["propagate", path(&circuit("bell.qc")), "+ZZZ"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qc");
    std::fs::write(&bad, "qubits 2\nCX 0 0\n").unwrap();
    let out = stabzx(&["stabilizers", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = stabzx(&["stabilizers", "--no-such-flag", path(&circuit("bell.qc"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stabilizers_of_bell_and_empty() {
    let out = stabzx(&["stabilizers", path(&circuit("bell.qc")), "--check"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "+XX\n+ZZ\n");
    let out = stabzx(&["stabilizers", path(&circuit("empty.qc"))]);
    assert_eq!(stdout(&out), "+Z\n");
}

#[test]
fn stabilizers_of_ghz() {
    let out = stabzx(&["stabilizers", path(&circuit("ghz3.qc"))]);
    assert_eq!(stdout(&out), "+XXX\n+ZZI\n+IZZ\n");
}

#[test]
fn tableau_rows() {
    let out = stabzx(&["tableau", path(&circuit("bell.qc"))]);
    assert_eq!(stdout(&out), "+ZI\n+IX\n+XX\n+ZZ\n");
}

#[test]
fn confluence_rejects_zero_instances() {
    let out = stabzx(&["confluence", "--instances", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn confluence_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = stabzx(&[
            "confluence",
            "--qubits",
            "5",
            "--gates",
            "20",
            "--orders",
            "4",
            "--instances",
            "30",
            "--seed",
            "7",
            "--report",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["summary"]["pass"], true);
    assert_eq!(report["instances"].as_array().unwrap().len(), 30);
}

#[test]
fn confluence_prints_report_to_stdout() {
    let out = stabzx(&[
        "confluence",
        "--qubits",
        "3",
        "--gates",
        "8",
        "--orders",
        "2",
        "--instances",
        "5",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["spec"]["seed"], 0);
}

#[test]
fn ghz_parent_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    let out = stabzx(&[
        "parent-hamiltonian",
        path(&circuit("ghz3.qc")),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let h: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let terms = h["terms"].as_array().unwrap();
    let mut coeffs: Vec<&str> = terms.iter().map(|t| t["coeff"].as_str().unwrap()).collect();
    coeffs.sort();
    assert_eq!(coeffs, ["-1/2", "-1/2", "-1/2", "3/2"]);
}

#[test]
fn bell_parent_hamiltonian_has_three_terms() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    stabzx(&[
        "parent-hamiltonian",
        path(&circuit("bell.qc")),
        "--json",
        json.to_str().unwrap(),
    ]);
    let h: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(h["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn ghz_parent_hamiltonian_check() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    let out = stabzx(&[
        "parent-hamiltonian",
        path(&circuit("ghz3.qc")),
        "--check",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let h: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let s = &h["spectral"];
    assert_eq!(s["kernel_dim"], 1);
    assert!((s["gap"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(s["passed"], true);
}

#[test]
fn flatten_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("u.csv");
    let out = stabzx(&["flatten", path(&circuit("bell.qc")), "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 4);
}
