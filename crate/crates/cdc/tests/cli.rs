use std::path::Path;
use std::process::Command;

use cdc_workbench::cli::run;
use cdc_workbench::subspaces::Cdc;

/// Runs the CLI in process; returns (exit code, stdout, stderr).
fn cdcw(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cdcw"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(line: &str) -> serde_json::Value {
    serde_json::from_str(line).unwrap()
}

#[test]
fn count_values() {
    assert_eq!(cdcw(&["count", "delsarte", "2", "3", "3", "2", "2"]).1, "49\n");
    assert_eq!(cdcw(&["count", "gauss", "4", "0", "2"]).1, "1\n");
    assert_eq!(cdcw(&["count", "bounded", "2", "4", "4", "2", "3"]).1, "2776\n");
    assert_eq!(cdcw(&["count", "bounded", "2", "4", "4", "1", "2"]).1, "7576\n");
    assert_eq!(cdcw(&["count", "mrd", "2", "3", "3", "2"]).1, "64\n");
}

#[test]
fn count_usage_errors() {
    let (code, _, err) = cdcw(&["count", "bounded", "2", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("Q A B D U"), "{err}");
    let (code, _, err) = cdcw(&["count", "mrd", "2", "3", "3", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("d = 4"), "{err}");
    assert_eq!(cdcw(&["count", "catalan", "3"]).0, 2);
    assert_eq!(cdcw(&["frobnicate"]).0, 2);
    assert_eq!(cdcw(&["--help"]).0, 0);
}

#[test]
fn bound_examples() {
    let (code, out, _) = cdcw(&[
        "bound", "--family", "cor43", "--q", "2", "--n", "12", "--d", "4", "--k", "6", "--n1", "6", "--u1", "4", "--c1", "1",
        "--c2", "1",
    ]);
    assert_eq!(code, 0);
    let v = json(out.trim());
    assert_eq!(v["total"], "1214577088");
    assert_eq!(v["components"].as_array().unwrap().len(), 4);
    let (code, out, _) = cdcw(&["bound", "--family", "linkage", "--q", "2", "--n", "12", "--d", "4", "--k", "6", "--n1", "6"]);
    assert_eq!(code, 0);
    assert_eq!(json(out.trim())["total"], "1212418496");
}

#[test]
fn bound_optimize_and_poly() {
    let (code, out, _) = cdcw(&["bound", "--family", "cor43", "--q", "2", "--n", "12", "--d", "4", "--k", "6", "--optimize"]);
    assert_eq!(code, 0);
    let total: u64 = json(out.trim())["total"].as_str().unwrap().parse().unwrap();
    assert!(total >= 1214577088);
    let (code, out, _) = cdcw(&["bound", "--family", "cor45", "--q", "2", "--n", "14", "--d", "6", "--k", "7"]);
    assert_eq!(code, 0);
    assert_eq!(json(out.trim())["total"], "34532242136");
}

#[test]
fn bound_errors() {
    let (code, _, err) = cdcw(&["bound", "--family", "cor45", "--q", "3", "--n", "15", "--d", "4", "--k", "5"]);
    assert_eq!(code, 3);
    assert!(err.contains("(3,7,4,3)"), "{err}");
    let (code, _, err) = cdcw(&[
        "bound", "--family", "cor43", "--q", "2", "--n", "12", "--d", "4", "--k", "6", "--n1", "6", "--u1", "3", "--c1", "1",
        "--c2", "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("hypothesis"), "{err}");
    let (code, _, _) = cdcw(&["bound", "--family", "cor99", "--q", "2", "--n", "12", "--d", "4", "--k", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn user_registry_fills_a_miss() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.txt");
    std::fs::write(&path, "3 7 4 3 6977 test value\n").unwrap();
    let (code, out, _) = cdcw(&[
        "--registry",
        path.to_str().unwrap(),
        "bound",
        "--family",
        "cor45",
        "--q",
        "3",
        "--n",
        "15",
        "--d",
        "4",
        "--k",
        "5",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("test value"));
    let (code, out, _) = cdcw(&["registry", "lookup", "2", "8", "4", "4"]);
    assert_eq!(code, 0);
    assert_eq!(json(out.trim())["value"], "4801");
    let (code, out, _) = cdcw(&["registry", "list"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("2 10 4 5 1178824 ")));
}

#[test]
fn table_rows() {
    let (code, out, err) = cdcw(&["table", "--table", "4", "--q", "2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().count() >= 1);
    assert!(out.lines().all(|l| json(l)["matches"] == true));
    let (code, _, _) = cdcw(&["table", "--table", "9"]);
    assert_eq!(code, 2);
}

fn blocks_args(out: &str) -> Vec<&str> {
    vec![
        "build",
        "--family",
        "blocks",
        "--q",
        "2",
        "--n",
        "8",
        "--d",
        "4",
        "--k",
        "4",
        "--n1",
        "4",
        "--a1",
        "2",
        "--b1",
        "1",
        "--b2",
        "1",
        "--out",
        out,
        "--mode",
        "exhaustive",
    ]
}

#[test]
fn build_blocks_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blocks.cdc");
    let (code, out, err) = cdcw(&blocks_args(path.to_str().unwrap()));
    assert_eq!(code, 0, "{err}");
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(json(lines[0])["total"], "1024");
    assert_eq!(json(lines[1])["min_found"], 4);
    let (code, out, _) = cdcw(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(out.trim());
    assert_eq!(v["min_found"], 4);
    assert_eq!(v["codewords"], 1024);
    // Round trip: re-reading and re-writing gives identical bytes.
    let bytes = std::fs::read(&path).unwrap();
    let again = dir.path().join("again.cdc");
    Cdc::read(&path).unwrap().write(&again).unwrap();
    assert_eq!(bytes, std::fs::read(&again).unwrap());
    assert_eq!(cdcw(&["verify", again.to_str().unwrap()]).1, out);
}

#[test]
fn verify_detects_duplicate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.cdc");
    let text = "CDC 2 4 2 2 3\n1 0 0 0\n0 1 0 0\n\n0 0 1 0\n0 0 0 1\n\n1 0 0 0\n0 1 0 0\n";
    std::fs::write(&path, text).unwrap();
    let (code, out, err) = cdcw(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(json(out.trim())["min_found"], 0);
    assert!(err.contains("witness"), "{err}");
}

#[test]
fn verify_sampling_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blocks.cdc");
    assert_eq!(cdcw(&blocks_args(path.to_str().unwrap())).0, 0);
    let p = path.to_str().unwrap();
    let a = cdcw(&["verify", p, "--mode", "sample:500", "--seed", "7"]);
    let b = cdcw(&["--jobs", "1", "verify", p, "--mode", "sample:500:7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(cdcw(&["verify", p, "--mode", "sometimes"]).0, 2);
}

#[test]
fn build_count_only_multilevel() {
    let (code, out, _) = cdcw(&[
        "build",
        "--family",
        "multilevel_I",
        "--q",
        "2",
        "--n",
        "12",
        "--d",
        "4",
        "--k",
        "6",
        "--n1",
        "6",
        "--u1",
        "4",
        "--c1",
        "1",
        "--c2",
        "1",
        "--count-only",
    ]);
    assert_eq!(code, 0);
    let v = json(out.trim());
    let comps = v["components"].as_array().unwrap();
    let get = |name: &str| comps.iter().find(|c| c["name"] == name).unwrap()["count"].clone();
    assert_eq!(get("L1"), "2154496");
    assert_eq!(get("L2"), "4096");
    assert_eq!(v["explicit"], false);
}

#[test]
fn build_from_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.txt");
    std::fs::write(&plan, "family = multilevel_II\nq = 2\nn = 8\nd = 4\nk = 4\nn1 = 4\nu1 = 2\nb1 = 1\nb2 = 1\n").unwrap();
    let out_path = dir.path().join("ml.cdc");
    let (code, out, err) =
        cdcw(&["build", "--plan", plan.to_str().unwrap(), "--out", out_path.to_str().unwrap(), "--mode", "exhaustive"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(json(out.lines().next().unwrap())["total"], "4690");
    assert_eq!(Cdc::read(&out_path).unwrap().len(), 4690);
    let (code, _, err) = cdcw(&["build", "--plan", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(code, 1, "{err}");
}

fn run_binary(args: &[&str], dir: &Path) -> (i32, Vec<u8>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_cdcw")).args(args).current_dir(dir).output().unwrap();
    (o.status.code().unwrap(), o.stdout, o.stderr)
}

#[test]
fn binary_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<_> = (0..2)
        .map(|i| {
            let file = format!("b{i}.cdc");
            let mut args = blocks_args(&file);
            if i == 1 {
                args.extend(["--jobs", "2"]);
            }
            let r = run_binary(&args, dir.path());
            (r, std::fs::read(dir.path().join(&file)).unwrap())
        })
        .collect();
    assert_eq!(runs[0].0 .0, 0);
    assert_eq!(runs[0].0 .1, runs[1].0 .1);
    assert_eq!(runs[0].1, runs[1].1);
    let (code, _, err) = run_binary(&["bound", "--family", "cor45", "--q", "3", "--n", "15", "--d", "4", "--k", "5"], dir.path());
    assert_eq!(code, 3);
    assert!(String::from_utf8(err).unwrap().contains("(3,7,4,3)"));
}
