use std::path::Path;
use std::process::{Command, Output};

use biserial::quiver::check_complete_gentle;
use biserial::text::parse_quiver;
use tempfile::TempDir;

const KRONECKER: &str = "quiver kronecker\nvertex 1\nvertex 2\narrow a : 1 -> 2\narrow b : 1 -> 2\n";

const TWO_LOOPS: &str = "quiver two_loops\nvertex 0\narrow a : 0 -> 0\narrow b : 0 -> 0\nrel a*a\nrel b*b\n";

fn biserial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biserial"))
        .args(args)
        .env_remove("BISERIAL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_axioms() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.q", KRONECKER);
    let out = biserial(&["validate", &k]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("special biserial: yes; gentle: yes; complete gentle: no"), "{text}");
}

#[test]
fn dim_evaluates_the_formula() {
    let out = biserial(&["dim", "--n", "2,2", "--r", "1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn kronecker_moduli_is_projective_plane() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.q", KRONECKER);
    let out = biserial(&["moduli", &k, "--dim", "1=2,2=2", "--theta", "1=1,2=-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text.lines().next().unwrap();
    assert!(line.starts_with("r=(a:2,b:2,"), "{line}");
    assert!(line.contains("P^2") && line.ends_with("(dim 2)"), "{line}");
}

#[test]
fn completion_output_parses_as_complete_gentle() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.q", KRONECKER);
    let out = biserial(&["complete", &k]);
    assert!(out.status.success());
    let file = parse_quiver(&stdout(&out)).unwrap();
    assert!(check_complete_gentle(&file.bound).is_pass());
    let again = write(&dir, "c.q", &stdout(&out));
    assert_eq!(stdout(&biserial(&["complete", &again])), stdout(&out));
}

#[test]
fn cycles_and_components_of_two_loops() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.q", TWO_LOOPS);
    let cycles = stdout(&biserial(&["cycles", &t]));
    assert_eq!(cycles.lines().count(), 2, "{cycles}");
    let comps = biserial(&["components", &t, "--dim", "0=2"]);
    assert!(comps.status.success());
    assert!(stdout(&comps).contains("r=(a:1,b:1)  dim"));
}

#[test]
fn count_points_and_degenerate() {
    let out = stdout(&biserial(&["count-points", "--n", "1", "--r", "0", "--q", "2,3"]));
    assert_eq!(out, "q=2: 1\nq=3: 1\n");
    let out = stdout(&biserial(&["count-points", "--n", "2,2", "--r", "1,1", "--q", "2"]));
    assert_eq!(out, "q=2: 28\n");
    let deg = biserial(&["degenerate", "--n", "1,1", "--r", "1,0", "--to", "0,0"]);
    assert!(deg.status.success());
    let text = stdout(&deg);
    assert!(text.contains("a0: [t]") && !text.contains(": no"), "{text}");
}

#[test]
fn decompose_and_stability_of_a_kronecker_module() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.q", KRONECKER);
    let out = stdout(&biserial(&["decompose", &k, "--dim", "1=1,2=1", "--rank", "a=1,b=1"]));
    assert!(out.contains("1 x band a.b^-1"), "{out}");
    let m = write(&dir, "m.json", r#"{"dim":{"1":1,"2":1},"mats":{"a":[["1"]],"b":[["0"]]}}"#);
    let out = stdout(&biserial(&["stability", &k, "--module", &m, "--theta", "1=1,2=-1"]));
    assert!(out.starts_with("stable"), "{out}");
    let out = stdout(&biserial(&["stability", &k, "--module", &m, "--theta", "1=-1,2=1"]));
    assert!(out.starts_with("unstable"), "{out}");
}

#[test]
fn exit_codes_separate_domain_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(biserial(&["dim", "--n", "2,2", "--r", "3,1"]).status.code(), Some(1));
    let bad = write(&dir, "bad.q", "quiver x\nvertex 1\narrow a : 1 -> 7\n");
    let out = biserial(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(biserial(&["dim", "--n", "2"]).status.code(), Some(2));
    assert_eq!(biserial(&["frobnicate"]).status.code(), Some(2));
    let missing = dir.path().join("missing.q");
    assert_eq!(biserial(&["validate", path_str(&missing)]).status.code(), Some(2));
}

#[test]
fn json_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.q", KRONECKER);
    let args = ["--format", "json", "decompose", &k, "--dim", "1=2,2=2"];
    let first = biserial(&args);
    assert!(first.status.success());
    let value: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!(value["components"].is_array());
    assert_eq!(biserial(&args).stdout, first.stdout);
    let threaded = Command::new(env!("CARGO_BIN_EXE_biserial"))
        .args(args)
        .env("BISERIAL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(threaded.stdout, first.stdout);
    let reseeded = biserial(&["--seed", "99", "--format", "json", "decompose", &k, "--dim", "1=2,2=2"]);
    assert!(reseeded.status.success());
}

#[test]
fn domain_errors_in_json_carry_the_error_name() {
    let out = biserial(&["--format", "json", "dim", "--n", "1", "--r", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["error"], "InvalidRankSequence");
}
