use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetgeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn json_stderr(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn write_dessin(dir: &Path, name: &str, n: usize, g0: &str, g1: &str) -> String {
    let path = dir.join(name);
    let text = serde_json::json!({ "n": n, "g0": g0, "g1": g1 }).to_string();
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn enumerate_index_six_writes_loadable_dessins() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["enumerate", "--presentation", "G", "--index", "6", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["count"], 56);
    assert_eq!(v["tables"].as_array().unwrap().len(), 56);
    let first = dir.path().join("dessin_0001.json");
    let analyzed = run(&["analyze", "--dessin", first.to_str().unwrap()]);
    assert!(analyzed.status.success());
    assert_eq!(json_stdout(&analyzed)["n"], 6);
    assert!(dir.path().join("table_0056.json").exists());
}

#[test]
fn enumerate_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("seconds");
        v
    };
    let a = strip(json_stdout(&run(&["enumerate", "--presentation", "G", "--index", "7"])));
    let b = strip(json_stdout(&run(&["--jobs", "1", "enumerate", "--presentation", "G", "--index", "7"])));
    assert_eq!(a, b);
}

#[test]
fn coset_enumeration_and_resource_limit() {
    let ok = run(&["enumerate", "--presentation", "G", "--subgroup", "a,bab"]);
    assert!(ok.status.success());
    let table = &json_stdout(&ok)["tables"][0];
    assert_eq!(table["g1"], "(1,2)");
    assert_eq!(table["transversal"], serde_json::json!(["e", "b"]));

    let limited = run(&["enumerate", "--presentation", "G", "--subgroup", "a", "--max-cosets", "500"]);
    assert_eq!(limited.status.code(), Some(3));
    assert_eq!(json_stderr(&limited)["error"], "resource_limit");
}

#[test]
fn score_reports_the_mermin_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_dessin(dir.path(), "mermin.json", 9, "(1,2,4,8,6,3)(5,9,7)", "(2,5)(3,7)(4,6)(8,9)");
    let out = run(&["score", "--dessin", &path]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let grids: Vec<&Value> = v["geometries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["recognized"].as_array().unwrap().iter().any(|n| n == "grid(3,3)"))
        .collect();
    assert_eq!(grids.len(), 2);
    let mut us: Vec<u64> = grids.iter().map(|g| g["reports"]["iterated"]["u"].as_u64().unwrap()).collect();
    us.sort_unstable();
    assert_eq!(us, vec![5, 6]);
    let five = grids.iter().find(|g| g["reports"]["iterated"]["u"] == 5).unwrap();
    assert_eq!(five["reports"]["iterated"]["l_over_u"], "6/5");
    assert!(five["reports"]["pairwise"]["u"].is_u64());
}

#[test]
fn table1_hexagon_row() {
    let out = run(&["table1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["geometry"] == "GH(2,2)").unwrap();
    assert_eq!((row["l"].as_u64(), row["u"].as_u64()), (Some(63), Some(3)));
    assert_eq!(row["l_over_u"], "21");
    assert_eq!(row["log2_h_rounded"], 14);
    let missing = v["rows"].as_array().unwrap().iter().find(|r| r["geometry"] == "GQ(2,4)").unwrap();
    assert!(missing["u"].is_null());
    assert_eq!(missing["provenance"], "requires externally supplied dessin");
}

#[test]
fn pauli_commands() {
    for args in [&["pauli", "mermin-square"][..], &["pauli", "pentagram"], &["pauli", "maxset", "3"]] {
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
    }
    let given = run(&["pauli", "mermin-square", "--ops", "XI,IX,XX,IZ,ZI,ZZ,XZ,ZX,YY"]);
    assert_eq!(json_stdout(&given)["signs"], serde_json::json!([1, 1, 1, 1, 1, -1]));
    let anticommuting = run(&["pauli", "mermin-square", "--ops", "XI,ZI,XX,IZ,ZI,ZZ,XZ,ZX,YY"]);
    assert_eq!(anticommuting.status.code(), Some(4));
    let all_positive = run(&["pauli", "mermin-square", "--ops", "II,II,II,II,II,II,II,II,II"]);
    assert_eq!(all_positive.status.code(), Some(4));
    let fano = json_stdout(&run(&["pauli", "maxset", "3"]));
    assert_eq!(fano["geometry"]["recognized"], serde_json::json!(["Fano", "PG(2,2)"]));
}

#[test]
fn belyi_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = write_dessin(dir.path(), "p2.json", 6, "(1,2,4,6,5,3)", "(2,3)(4,5)");
    let ok = run(&["belyi-check", "--function", "(4/27)*x^6/(x^2-1)^2", "--dessin", &p2]);
    assert!(ok.status.success());
    assert_eq!(json_stdout(&ok)["match"], true);
    let printed = run(&["belyi-check", "--function", "-(1/64)*(x-1)^3*(x+3)^2 / x^3"]);
    assert_eq!(printed.status.code(), Some(4));
    assert_eq!(json_stdout(&printed)["passport"]["degree"], 5);
    let bad = run(&["belyi-check", "--function", "x +"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json_stderr(&bad)["error"], "parse");
}

#[test]
fn hyperplane_counts_and_input_errors() {
    let doily = json_stdout(&run(&["hyperplanes", "--geometry", "GQ(2,2)", "--mode", "brute"]));
    assert_eq!(doily["h"], 31);
    assert_eq!(doily["log2_h_rounded"], 5);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fano.json");
    std::fs::write(&file, r#"{"points": 7, "lines": [[1,2,3],[1,4,5],[1,6,7],[2,4,6],[2,5,7],[3,4,7],[3,5,6]]}"#).unwrap();
    let fano = json_stdout(&run(&["hyperplanes", "--geometry", file.to_str().unwrap(), "--list"]));
    assert_eq!(fano["h"], 7);
    assert_eq!(fano["hyperplanes"].as_array().unwrap().len(), 7);

    let unknown = run(&["hyperplanes", "--geometry", "no such thing"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert_eq!(json_stderr(&unknown)["error"], "unknown_geometry");

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{").unwrap();
    let malformed = run(&["analyze", "--dessin", broken.to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(2));
    let intransitive = write_dessin(dir.path(), "split.json", 4, "(1,2)", "()");
    assert_eq!(json_stderr(&run(&["analyze", "--dessin", &intransitive]))["error"], "intransitive");
}
