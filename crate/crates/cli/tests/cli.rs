use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn gridtau() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gridtau"));
    cmd.env_remove("GRIDTAU_MAX_GRID");
    cmd
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    gridtau().args(args).output().expect("binary runs")
}

fn run_path(args: &[&str], path: &PathBuf) -> Output {
    gridtau()
        .args(args)
        .arg(path)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_matches_golden_reports() {
    for name in ["unknot1", "trefoil"] {
        let out = run_path(&["compute"], &fixture(&format!("{name}.json")));
        assert_eq!(out.status.code(), Some(0), "{name}");
        let golden = fs::read_to_string(fixture(&format!("{name}.report.json"))).unwrap();
        assert_eq!(stdout(&out), golden, "{name}");
    }
}

#[test]
fn unknot_and_trefoil_values() {
    let v: Value =
        serde_json::from_str(&stdout(&run_path(&["compute"], &fixture("unknot1.json")))).unwrap();
    assert_eq!(v["tau"], 0);
    assert_eq!(
        v["T"]["entries"],
        serde_json::json!([{"d": 0, "s": 0, "t": 1}])
    );
    let v: Value =
        serde_json::from_str(&stdout(&run_path(&["compute"], &fixture("trefoil.json")))).unwrap();
    assert_eq!(v["tau"], 1);
    assert_eq!(v["genus_lower"], 1);
}

#[test]
fn output_is_byte_stable() {
    let a = run_path(&["compute", "--format", "json"], &fixture("trefoil.json"));
    let b = run_path(&["compute", "--threads", "1"], &fixture("trefoil.json"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sigma_adds_quasi_alternating_bounds() {
    let out = run_path(&["compute", "--sigma", "-1"], &fixture("hopf.json"));
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["bounds"]["quasi_alt_line_ok"], true);
    assert_eq!(v["bounds"]["quasi_alt_upper"], 0);
    let bad = run_path(&["compute", "--sigma", "3"], &fixture("hopf.json"));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn table_format_is_readable() {
    let out = run_path(&["--format", "table", "compute"], &fixture("trefoil.json"));
    let text = stdout(&out);
    assert!(text.contains("tau 1"), "{text}");
    assert!(text.contains("slice genus >= 1"), "{text}");
}

#[test]
fn oversized_grid_hits_the_cap() {
    let out = run_path(&["compute"], &fixture("oversized12.json"));
    assert_eq!(out.status.code(), Some(3));
    let low = gridtau()
        .env("GRIDTAU_MAX_GRID", "4")
        .arg("compute")
        .arg(fixture("trefoil.json"))
        .output()
        .unwrap();
    assert_eq!(low.status.code(), Some(3));
    let flag = run_path(&["compute", "--max-grid", "5"], &fixture("trefoil.json"));
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"size":3,"O":[0,1,1],"X":[0,1,2]}"#).unwrap();
    assert_eq!(run_path(&["compute"], &bad).status.code(), Some(2));
    fs::write(&bad, "not json").unwrap();
    assert_eq!(run_path(&["compute"], &bad).status.code(), Some(2));
    assert_eq!(
        run(&["compute", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["--max-grid", "0", "gen", "unlink", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_torus_writes_the_trefoil() {
    let out = run(&["gen", "torus", "2", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"size\":5,\"O\":[4,3,2,1,0],\"X\":[1,0,4,3,2],\"special\":[0]}\n"
    );
    assert_eq!(out.stdout, fs::read(fixture("trefoil.json")).unwrap());
    assert_eq!(run(&["gen", "torus", "0", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "torus", "3", "2"]).status.code(), Some(2));
}

#[test]
fn gen_unlink_writes_output_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("u3.json");
    let out = gridtau()
        .args(["gen", "unlink", "3", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "{\"size\":3,\"O\":[0,1,2],\"X\":[0,1,2],\"special\":[0,1,2]}\n"
    );
}

#[test]
fn diagram_files_round_trip() {
    for name in ["unknot1.json", "trefoil.json", "hopf.json"] {
        let out = run_path(&["transform", "move", "translate 0 0"], &fixture(name));
        assert_eq!(out.stdout, fs::read(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn transforms() {
    let mirror = run_path(&["transform", "mirror"], &fixture("trefoil.json"));
    assert_eq!(mirror.status.code(), Some(0));
    let dir = tempdir().unwrap();
    let left = dir.path().join("left.json");
    fs::write(&left, &mirror.stdout).unwrap();
    let v: Value = serde_json::from_str(&stdout(&run_path(&["compute"], &left))).unwrap();
    assert_eq!(v["tau"], -1);

    let sum = gridtau()
        .args(["transform", "connectsum"])
        .arg(fixture("trefoil.json"))
        .arg(fixture("unknot1.json"))
        .output()
        .unwrap();
    let d: Value = serde_json::from_slice(&sum.stdout).unwrap();
    assert_eq!(d["size"], 6);
    let path = dir.path().join("sum.json");
    fs::write(&path, &sum.stdout).unwrap();
    let v: Value = serde_json::from_str(&stdout(&run_path(&["compute"], &path))).unwrap();
    assert_eq!(
        v["T"]["entries"],
        serde_json::json!([{"d": 0, "s": 1, "t": 1}])
    );

    let stab = run(&[
        "transform",
        "move",
        "stab SE 0 0",
        fixture("unknot1.json").to_str().unwrap(),
    ]);
    let d: Value = serde_json::from_slice(&stab.stdout).unwrap();
    assert_eq!(d["size"], 2);
    assert_eq!(d["O"], serde_json::json!([0, 1]));

    let union = gridtau()
        .args(["transform", "union"])
        .arg(fixture("hopf.json"))
        .arg(fixture("unknot1.json"))
        .output()
        .unwrap();
    let d: Value = serde_json::from_slice(&union.stdout).unwrap();
    assert_eq!(d["size"], 5);

    let rev = run_path(&["transform", "reverse"], &fixture("hopf.json"));
    assert_eq!(rev.status.code(), Some(0));

    let illegal = run_path(
        &["transform", "move", "comm col 0"],
        &fixture("trefoil.json"),
    );
    assert_eq!(illegal.status.code(), Some(2));
    let garbled = run_path(&["transform", "move", "twist 3"], &fixture("trefoil.json"));
    assert_eq!(garbled.status.code(), Some(2));
}

#[test]
fn verify_passes_on_fixtures() {
    let out = run_path(&["verify"], &fixture("trefoil.json"));
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);

    let out = run_path(&["verify", "--seed", "7"], &fixture("hopf.json"));
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"moves(50)"), "{names:?}");

    let expect = fixture("trefoil.T.json");
    let out = gridtau()
        .args(["verify", "--expect"])
        .arg(&expect)
        .arg(fixture("trefoil.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_fails_on_corrupted_fixture() {
    let out = gridtau()
        .args(["verify", "--moves", "5", "--expect"])
        .arg(fixture("trefoil.corrupted-T.json"))
        .arg(fixture("trefoil.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn dump_complex_writes_gradings() {
    let dir = tempdir().unwrap();
    let dump = dir.path().join("complex.json");
    let out = gridtau()
        .args(["compute", "--dump-complex"])
        .arg(&dump)
        .arg(fixture("unknot1.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&dump).unwrap()).unwrap();
    let gradings = v["gradings"].as_array().unwrap();
    assert_eq!(gradings.len(), 1);
    assert_eq!(gradings[0]["maslov"], 0);
    assert_eq!(gradings[0]["states"][0]["A"], 0);
}
