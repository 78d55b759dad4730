use std::io::Write;
use std::process::Command;

use ratsurf::cli::{digest, run};
use ratsurf::weyl::simple_reflections;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Value, String) {
    let mut argv = vec!["ratsurf"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = if out.stdout.trim_start().starts_with('{') {
        serde_json::from_str(&out.stdout).expect("stdout is JSON")
    } else {
        Value::Null
    };
    (out.code, v, out.stderr)
}

fn gens_file(mats: &[Vec<Vec<i64>>]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(serde_json::to_string(mats).unwrap().as_bytes()).unwrap();
    f
}

fn identity(dim: usize) -> Vec<Vec<i64>> {
    (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect()
}

#[test]
fn exc_six_points() {
    let (code, v, _) = call(&["exc", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 27);
    assert_eq!(v["results"]["complete"], true);
}

#[test]
fn cone_five_points() {
    let (code, v, _) = call(&["cone", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["fiber_pairs"], serde_json::json!([1]));
    assert!(v["results"]["slice"].is_object());
}

#[test]
fn reports_are_deterministic_and_digests_match() {
    let a = run(["ratsurf", "reduce", "--class", "[3,2,1,1,1,1,1,1]"]);
    let b = run(["ratsurf", "reduce", "--class", "[3,2,1,1,1,1,1,1]"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["inputs_digest"].as_str().unwrap(), digest(&v["inputs"]));
    assert!(v.get("timing_ms").is_none());
    let (_, t, _) = call(&["--timing", "weyl", "--n", "4", "--order-only"]);
    assert!(t["timing_ms"].is_number());
    assert_eq!(t["results"]["order"], "120");
}

#[test]
fn inputs_round_trip() {
    let (_, v, _) = call(&["reduce", "--class", "[2,1,1,1,1,1]"]);
    let class = v["inputs"]["class"].to_string();
    let (_, w, _) = call(&["reduce", "--class", &class]);
    assert_eq!(v["results"], w["results"]);

    let (_, v, _) = call(&["reduce", "--omega", "[3, 1, 1/2]"]);
    let omega: Vec<String> = serde_json::from_value(v["inputs"]["omega"].clone()).unwrap();
    let (_, w, _) = call(&["reduce", "--omega", &format!("[{}]", omega.join(","))]);
    assert_eq!(v["results"], w["results"]);
    assert_eq!(v["inputs_digest"], w["inputs_digest"]);

    let (_, v, _) = call(&["cone", "--n", "6", "--scan", "0, 1/2"]);
    let fiber = v["inputs"]["fiber"].to_string();
    let scan: Vec<String> = serde_json::from_value(v["inputs"]["scan"].clone()).unwrap();
    let (_, w, _) = call(&["cone", "--n", "6", "--fiber", &fiber, "--scan", &scan.join(",")]);
    assert_eq!(v["results"], w["results"]);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["--version"]).0, 0);
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&["exc", "--n", "6", "--bogus"]).0, 1);
    let (code, v, err) = call(&["reduce", "--class", "[1,1]", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("conflicts"));
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["reduce", "--class", "[2,1,1]"]).0, 1);
    assert_eq!(call(&["weyl", "--n", "9"]).0, 1);
    assert_eq!(call(&["hexagon", "--kind", "Gnks", "--n", "2", "--k", "7", "--s", "2"]).0, 1);
    assert_eq!(call(&["selftest", "--only", "14"]).0, 1);
}

#[test]
fn group_files() {
    let f = gens_file(&[identity(4)]);
    let (code, v, _) = call(&["invariants", "--gens", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], "1");
    assert_eq!(v["results"]["rank"], 4);
    assert_eq!(v["results"]["holds"], false);

    let refl = simple_reflections(4).unwrap()[0].rows();
    let f = gens_file(&[refl]);
    let (code, v, _) = call(&["invariants", "--gens", f.path().to_str().unwrap(), "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], "2");
    assert_eq!(v["results"]["rank"], 4);

    let mut bad = identity(4);
    bad[0][0] = 2;
    let f = gens_file(&[bad]);
    let (code, _, err) = call(&["invariants", "--gens", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("e0"), "{err}");

    let f = gens_file(&[identity(4)]);
    assert_eq!(call(&["invariants", "--gens", f.path().to_str().unwrap(), "--n", "5"]).0, 1);
    assert_eq!(call(&["invariants", "--gens", "/nonexistent/gens.json"]).0, 1);
    let mut junk = tempfile::NamedTempFile::new().unwrap();
    junk.write_all(b"[[1,2],").unwrap();
    assert_eq!(call(&["invariants", "--gens", junk.path().to_str().unwrap()]).0, 1);
}

#[test]
fn weyl_e6_is_minimal() {
    let gens: Vec<_> = simple_reflections(6).unwrap().iter().map(|g| g.rows()).collect();
    let f = gens_file(&gens);
    let (code, v, _) = call(&["invariants", "--gens", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], "51840");
    assert_eq!(v["results"]["rank"], 1);
    assert_eq!(v["results"]["holds"], true);
}

#[test]
fn conic_full_swap() {
    use ratsurf::gconic::FiberAction;
    let g = FiberAction::full_swap(5).to_isometry().unwrap().rows();
    let f = gens_file(&[g]);
    let (code, v, _) = call(&["conic", "--gens", f.path().to_str().unwrap(), "--g0", "3"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["minimal"], true);
    assert_eq!(v["results"]["case"], "case1");
    assert_eq!(v["results"]["Q_structure"], "D6");
}

#[test]
fn hexagon_commands() {
    let (code, v, _) = call(&["hexagon", "--kind", "Gnks", "--n", "9", "--k", "3", "--s", "2", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["order"], 81);
    assert_eq!(v["results"]["relations_ok"], true);
    assert_eq!(v["results"]["generators"].as_array().unwrap().len(), 3);
    let (code, v, _) = call(&["hexagon"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn selftest_subset() {
    let (code, v, err) = call(&["--sequential", "selftest", "--only", "8,9"]);
    assert_eq!(code, 0);
    assert_eq!(err.lines().count(), 2);
    assert!(err.lines().all(|l| l.contains("PASS")));
    assert_eq!(v["results"]["passed"], true);
    let (code, v, _) = call(&["selftest", "--only", "11"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["failed"], serde_json::json!([11]));
}

#[test]
fn binary_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_ratsurf")).args(["exc", "--n", "3"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["count"], 6);
    let out = Command::new(env!("CARGO_BIN_EXE_ratsurf")).args(["exc"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}
