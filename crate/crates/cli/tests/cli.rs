use std::path::Path;
use std::process::Command;

use ablab_cli::run_args;

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["ablab"];
    full.extend_from_slice(args);
    let code = run_args(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const SMALL_RUN: &str = r#"{
    "alpha": {"tau": "2", "seed": [1]},
    "beta": {"tau": "6", "seed": [2]},
    "omega": {"strategy": "alternating", "n": 200},
    "tau1": "2", "tau2": "6",
    "l_range": [1, 1]
}"#;

#[test]
fn bound_values() {
    let (code, out, _) = run(&["bound", "--tau1", "2", "--tau2", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theorem_bound"], "1/2");
    assert_eq!(v["embed_threshold"], "1/4");

    let (code, out, _) = run(&["bound", "--tau1", "2", "--tau2", "inf"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theorem_bound"], "1");
    assert_eq!(v["embed_threshold"], "1/2");
}

#[test]
fn inadmissible_bound_reports_json_error() {
    let (code, out, err) = run(&["bound", "--tau1", "3", "--tau2", "4"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["stage"], "bound");
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["bound", "--tau1", "x", "--tau2", "3"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn construct_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"tau": "6", "seed": [2]}"#);
    let a = dir.path().join("a");
    let (code, out, err) = run(&[
        "construct",
        "--config",
        &spec,
        "--n",
        "3",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let qs: Vec<&str> = v["convergents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["q"].as_str().unwrap())
        .collect();
    assert_eq!(qs[..2], ["2", "33"]);
    assert!(v["convergents"][0]["certified"].as_bool().unwrap());

    let manifest = a.join("manifest.json");
    let b = dir.path().join("b");
    let (code, _, err) = run(&[
        "construct",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    for f in ["number.json", "convergents.csv"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
}

#[test]
fn construct_with_too_small_depth_cap() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"kind": "periodic", "pre": [], "per": [1]}"#,
    );
    let (code, _, err) = run(&[
        "construct",
        "--config",
        &spec,
        "--n",
        "8",
        "--depth-cap",
        "4",
    ]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn witness_modes() {
    let dir = tempfile::tempdir().unwrap();
    let tau6 = write(dir.path(), "b.json", r#"{"tau": "6", "seed": [2]}"#);
    let (code, out, _) = run(&["witness", "--config", &tau6, "--tau2", "6", "--count", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["q"], "2");
    assert_eq!(v[1]["q"], "33");

    let golden = write(dir.path(), "g.json", r#"{"tau": "2", "seed": [1]}"#);
    let (code, out, _) = run(&["witness", "--config", &golden, "--window-q", "9"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["q"], "13");

    // golden has no witnesses for tau2 = 3
    let (code, _, _) = run(&[
        "witness",
        "--config",
        &golden,
        "--tau2",
        "3",
        "--depth-cap",
        "30",
    ]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["witness", "--config", &golden]);
    assert_eq!(code, 2);
}

#[test]
fn verify_bound_writes_outputs_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", SMALL_RUN);
    let a = dir.path().join("a");
    let (code, out, err) = run(&[
        "verify-bound",
        "--config",
        &cfg,
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["levels"][0]["status"], "VERIFIED");
    assert_eq!(report["theorem_bound"], "2/3");
    assert_eq!(out, read(&a, "report.json"));

    let manifest: serde_json::Value = serde_json::from_str(&read(&a, "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "verify-bound");
    assert_eq!(manifest["config"]["depth_cap"], 64);
    assert_eq!(manifest["config_sha256"], report["config_sha256"]);
    for (name, sha) in manifest["outputs"].as_object().unwrap() {
        assert_eq!(
            sha,
            &ablab_cli::output::sha256_hex(read(&a, name).as_bytes())
        );
    }

    let b = dir.path().join("b");
    let m = a.join("manifest.json");
    let (code, _, _) = run(&[
        "verify-bound",
        "--config",
        m.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for f in ["report.json", "witnesses.json", "orbit.csv", "boxcount.csv"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
}

#[test]
fn seed_override_changes_bernoulli_word() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL_RUN.replace(
        r#""strategy": "alternating""#,
        r#""strategy": "bernoulli", "p": "1/2""#,
    );
    let cfg = write(dir.path(), "run.json", &text);
    let mut reports = Vec::new();
    for seed in ["1", "2"] {
        let out = dir.path().join(seed);
        let (code, stdout, err) = run(&[
            "verify-bound",
            "--config",
            &cfg,
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(code == 0 || code == 4, "{err}");
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["omega"]["seed"].as_u64().unwrap().to_string(), seed);
        reports.push(read(&out, "orbit.csv"));
    }
    assert_ne!(reports[0], reports[1]);
}

#[test]
fn verify_bound_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        &SMALL_RUN.replace(r#""tau1": "2""#, r#""tau1": "3", "extra": 1"#),
    );
    let (code, _, err) = run(&[
        "verify-bound",
        "--config",
        &bad,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("extra"), "{err}");

    let inadmissible = write(
        dir.path(),
        "inad.json",
        &SMALL_RUN.replace(r#""tau1": "2", "tau2": "6""#, r#""tau1": "5", "tau2": "6""#),
    );
    let (code, _, err) = run(&[
        "verify-bound",
        "--config",
        &inadmissible,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("inadmissible"), "{err}");
}

#[test]
fn boxdim_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.csv", "x\n0\n1/4\n1/2\n3/4\n");
    let out = dir.path().join("o");
    let (code, stdout, err) = run(&[
        "boxdim",
        "--points",
        &pts,
        "--scales",
        "1/4,1/8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "r,count,ratio_approx");
    assert!(lines[1].starts_with("1/4,2,"), "{stdout}");
    assert!(lines[2].starts_with("1/8,4,"), "{stdout}");
    assert!(err.contains("estimate_approx="));
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "boxdim");

    let empty = write(dir.path(), "empty.csv", "");
    assert_eq!(run(&["boxdim", "--points", &empty, "--scales", "1/4"]).0, 2);
    let garbage = write(dir.path(), "g.csv", "lo,hi\n1/3,zz\n");
    let (code, _, err) = run(&["boxdim", "--points", &garbage, "--scales", "1/4"]);
    assert_eq!(code, 2);
    assert!(err.contains("row 1"), "{err}");
}

#[test]
fn binary_exit_codes_and_env_cap() {
    let bin = env!("CARGO_BIN_EXE_ablab");
    let out = Command::new(bin)
        .args(["bound", "--tau1", "3", "--tau2", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"exit_code\":2"));

    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "g.json", r#"{"tau": "2", "seed": [1]}"#);
    let capped = Command::new(bin)
        .args(["construct", "--config", &spec, "--n", "8"])
        .env("ABLAB_DEPTH_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let flag_wins = Command::new(bin)
        .args([
            "construct",
            "--config",
            &spec,
            "--n",
            "8",
            "--depth-cap",
            "20",
        ])
        .env("ABLAB_DEPTH_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
    let bad_env = Command::new(bin)
        .args(["construct", "--config", &spec])
        .env("ABLAB_DEPTH_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn boxdim_manifest_replay() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.csv", "1/3\n2/7\n9/10\n");
    let a = dir.path().join("a");
    let (code, first, _) = run(&[
        "boxdim",
        "--points",
        &pts,
        "--scales",
        "1/8,1/32",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let m = a.join("manifest.json");
    let b = dir.path().join("b");
    let (code, second, err) = run(&[
        "boxdim",
        "--config",
        m.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(first, second);
    assert_eq!(read(&a, "boxcount.csv"), read(&b, "boxcount.csv"));

    // a manifest is tied to its command and its input file
    let (code, _, err) = run(&["construct", "--config", m.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("boxdim"), "{err}");
    std::fs::write(&pts, "1/3\n").unwrap();
    let (code, _, err) = run(&["boxdim", "--config", m.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("changed"), "{err}");
}

#[test]
fn failed_outcome_reports_stage_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        &SMALL_RUN.replace("[1, 1]", "[1, 2]"),
    );
    let (code, out, err) = run(&[
        "verify-bound",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["outcome"]["failure_stage"], "separation:l=2");
    let e: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["stage"], "separation:l=2");
    assert!(e["error"].as_str().unwrap().contains("shorter"), "{err}");
}
