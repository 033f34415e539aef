use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_harnack");

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("harnack-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().next().expect("an error line");
    serde_json::from_str(line).expect("stderr is one JSON object")
}

const CROSS: &str = r#"{"vertices": [[1,0],[0,1],[-1,0],[0,-1]]}"#;

#[test]
fn polygon_stats_of_cross() {
    let d = scratch("polygon");
    let p = write(&d, "cross.json", CROSS);
    let o = run(&["polygon", "--in", &p]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"area":"2","g":1,"m":4,"n":4}"#);
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = run(&["polygon", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn malformed_json_is_parse_error() {
    let d = scratch("malformed");
    let p = write(&d, "bad.json", "{\"vertices\": [[0,0],");
    let o = run(&["polygon", "--in", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "parse");
}

#[test]
fn degenerate_polygon_rejected() {
    let d = scratch("degenerate");
    let p = write(&d, "line.json", r#"{"vertices": [[0,0],[1,1],[2,2]]}"#);
    let o = run(&["polygon", "--in", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr_json(&o)["error"].is_string());
}

#[test]
fn point_cap_enforced() {
    let d = scratch("cap");
    let p = write(&d, "big.json", r#"{"vertices": [[0,0],[4,0],[0,4]]}"#);
    let o = run(&["subdivisions", "--in", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr_json(&o)["message"].as_str().unwrap().contains("12"));
}

#[test]
fn sample_requires_seed() {
    let d = scratch("seed");
    let p = write(&d, "cross.json", CROSS);
    let o = run(&["sample", "--in", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn bad_sweep_rejected() {
    let d = scratch("sweep");
    let m = run(&["mesh", "--example", "cross-star"]);
    let p = write(&d, "m.json", &String::from_utf8_lossy(&m.stdout));
    let o = run(&["patchwork", "--in", &p, "--t-sweep", "0.1,1.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pipeline_is_deterministic() {
    let d = scratch("determinism");
    let p = write(&d, "cross.json", CROSS);
    let cfg = run(&["sample", "--in", &p, "--seed", "7"]);
    assert!(cfg.status.success());
    let c = write(&d, "cfg.json", &String::from_utf8_lossy(&cfg.stdout));
    let f1 = run(&["implicitize", "--in", &c]);
    let f2 = run(&["implicitize", "--in", &c]);
    assert_eq!(f1.stdout, f2.stdout);
    let f = write(&d, "f.json", &String::from_utf8_lossy(&f1.stdout));
    let a1 = run(&["spine", "--in", &f, "--res", "128", "--phases", "64"]);
    let a2 = run(&["spine", "--in", &f, "--res", "128", "--phases", "64"]);
    assert!(a1.status.success());
    assert_eq!(a1.stdout, a2.stdout);
    let s = stdout_json(&a1);
    assert_eq!(s["curve"]["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn configuration_commands_agree() {
    let d = scratch("config");
    let p = write(&d, "cross.json", CROSS);
    let cfg = run(&["sample", "--in", &p, "--seed", "2"]);
    let c = write(&d, "cfg.json", &String::from_utf8_lossy(&cfg.stdout));
    let rho = stdout_json(&run(&["rho", "--in", &c]));
    let sum: f64 = rho["rho"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!(sum.abs() < 1e-12);
    let jac = stdout_json(&run(&["jacobian", "--in", &c]));
    assert_eq!(jac["rank"], 2);
    let t = run(&["tdecomp", "--in", &c]);
    assert!(t.status.success());
}

#[test]
fn secondary_of_cross() {
    let d = scratch("secondary");
    let p = write(&d, "cross.json", CROSS);
    let s = stdout_json(&run(&["subdivisions", "--in", &p]));
    assert_eq!(s["count"], 3);
    let sc = stdout_json(&run(&["secondary", "--in", &p]));
    assert_eq!(sc["f_vector"], serde_json::json!([3, 3, 1]));
}

#[test]
fn render_writes_svg() {
    let d = scratch("render");
    let f = write(
        &d,
        "line.json",
        r#"{"terms": [{"v":[0,0],"c":"1"},{"v":[1,0],"c":"1"},{"v":[0,1],"c":"1"}]}"#,
    );
    let out = d.join("fig.svg");
    let o = run(&["render", "--amoeba", &f, "--spine", "--res", "128", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("marker-end").count(), 3);
}

#[test]
fn verify_acceptance_suite_with_polygon() {
    let d = scratch("verify");
    let p = write(&d, "cross.json", CROSS);
    let o = run(&["verify", "--suite", "paper", "--polygon", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 13);
}

#[test]
fn mesh_example_validates_and_glues() {
    let d = scratch("mesh");
    let m = run(&["mesh", "--example", "cross-diagonal", "--seed", "50"]);
    assert!(m.status.success());
    let p = write(&d, "m.json", &String::from_utf8_lossy(&m.stdout));
    let o = run(&["mesh", "--in", &p, "--spine", "--res", "256"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert!(v["disagreement"].is_null());
    assert_eq!(v["spine"]["curve"]["legs"].as_array().unwrap().len(), 4);
}

#[test]
fn mesh_disagreement_reports_point() {
    let d = scratch("disagree");
    let m = run(&["mesh", "--example", "cross-diagonal", "--seed", "50"]);
    let mut v: Value = serde_json::from_slice(&m.stdout).unwrap();
    for t in v["curves"][1]["terms"].as_array_mut().unwrap() {
        if t["v"] == serde_json::json!([1, 0]) {
            let c = t["c"].as_f64().unwrap();
            t["c"] = serde_json::json!(-c);
        }
    }
    let p = write(&d, "m.json", &v.to_string());
    let o = run(&["mesh", "--in", &p]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "mesh_disagreement");
    assert_eq!(e["point"], serde_json::json!([1, 0]));
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "polygon",
        "sample",
        "rho",
        "jacobian",
        "tdecomp",
        "implicitize",
        "amoeba",
        "spine",
        "subdivisions",
        "secondary",
        "mesh",
        "patchwork",
        "verify",
        "render",
    ] {
        let o = run(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
        assert!(!o.stdout.is_empty(), "{sub}");
    }
}
