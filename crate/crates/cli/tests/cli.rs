use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn arcgrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcgrid")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn realize_and_analyze_one_code() {
    let out = stdout(&arcgrid(&["realize", "--dt", "3_1 4 6 2"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["crossings"], 3);
    assert_eq!(v["pd"].as_array().unwrap().len(), 3);

    let out = stdout(&arcgrid(&["analyze", "--dt", "4_1 4 6 8 2"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((v["lower_bound"].as_u64(), v["upper_bound"].as_u64()), (Some(6), Some(6)));
    assert_eq!(v["alternating"], true);
}

#[test]
fn present_reduce_render() {
    let dir = tempfile::tempdir().unwrap();
    let grd = dir.path().join("k.grd");
    let code = "14n10 4 8 10 -14 2 -16 -20 -6 24 -12 26 18 28 22";
    stdout(&arcgrid(&["present", "--dt", code, "--out", path(&grd)]));
    assert!(fs::read_to_string(&grd).unwrap().starts_with("14n10 16\n"));

    let small = dir.path().join("small.grd");
    stdout(&arcgrid(&["reduce", "--input", path(&grd), "--out", path(&small)]));
    assert!(fs::read_to_string(&small).unwrap().starts_with("14n10 13\n"));

    let ascii = stdout(&arcgrid(&["render", "--input", path(&small)]));
    assert_eq!(ascii.lines().count(), 2 * 13 - 1);
    let svg = stdout(&arcgrid(&["render", "--format", "svg", "--input", path(&small)]));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(!arcgrid(&["render", "--format", "png", "--input", path(&small)]).status.success());

    let inv = stdout(&arcgrid(&["invariants", "--input", path(&small)]));
    let v: serde_json::Value = serde_json::from_str(inv.trim()).unwrap();
    assert_eq!(v["name"], "14n10");
}

#[test]
fn present_with_target() {
    let out = stdout(&arcgrid(&["present", "--dt", "4_1 4 6 8 2", "--target", "6"]));
    assert!(out.starts_with("4_1 6\n"));
}

#[test]
fn enumerate_small_size() {
    let out = stdout(&arcgrid(&["enumerate", "--size", "5"]));
    assert!(out.contains("2 Jones classes"), "{out}");
}

#[test]
fn pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.dt");
    fs::write(&input, "3_1 4 6 2\n4_1 4 6 8 2\n5_2 4 8 10 2 6\n").unwrap();
    let run = |out: &str, jobs: &str| {
        let out = dir.path().join(out);
        let text = stdout(&arcgrid(&["--input", path(&input), "--out", path(&out), "--jobs", jobs, "pipeline"]));
        assert!(text.starts_with("3 records"), "{text}");
        fs::read(out.join("report.jsonl")).unwrap()
    };
    assert_eq!(run("a", "1"), run("b", "4"));
}

#[test]
fn pipeline_empty_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.dt");
    fs::write(&empty, "").unwrap();
    let text = stdout(&arcgrid(&["--input", path(&empty), "--out", path(&dir.path().join("e")), "pipeline"]));
    assert!(text.starts_with("0 records"));

    let bad = dir.path().join("bad.dt");
    fs::write(&bad, "3_1 4 6 2\nnope 4 4\n").unwrap();
    let out = dir.path().join("b");
    let text = stdout(&arcgrid(&["--input", path(&bad), "--out", path(&out), "pipeline"]));
    assert!(text.contains("errors 1"), "{text}");
    let report = fs::read_to_string(out.join("report.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = report.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["arc_index"]["exact"], 5);
    assert!(lines[1]["errors"][0].as_str().unwrap().starts_with("parse:"));
}

#[test]
fn usage_errors() {
    assert!(!arcgrid(&["pipeline"]).status.success());
    assert!(!arcgrid(&["realize"]).status.success());
    assert!(!arcgrid(&["--stages", "9", "--input", "x", "--out", "y", "pipeline"]).status.success());
}
