//! End-to-end runs of the `ellq-verify` binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ellq-verify"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ellq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read_json(path: &PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// The report with wall-clock fields removed.
fn without_timing(mut v: serde_json::Value) -> serde_json::Value {
    v.as_object_mut().unwrap().remove("timing");
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("ms");
    }
    v
}

#[test]
fn passing_suite_writes_a_report() {
    let path = scratch("theta.json");
    let out = bin()
        .args(["theta", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = read_json(&path);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["suite"], "theta");
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["seed"], 20240611);
    let first = &v["checks"][0];
    for key in ["id", "anchor", "residual", "tol", "pass", "ms"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reports_are_reproducible_up_to_timing() {
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let st = bin()
            .args([
                "determinant",
                "--n",
                "2",
                "--seed",
                "5",
                "--threads",
                threads,
                "--report",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
    }
    assert_eq!(without_timing(read_json(&a)), without_timing(read_json(&b)));
}

#[test]
fn different_seeds_give_different_residuals() {
    let (a, b) = (scratch("seed-a.json"), scratch("seed-b.json"));
    for (path, seed) in [(&a, "1"), (&b, "2")] {
        assert_eq!(
            bin()
                .args(["rmatrix", "--seed", seed, "--report"])
                .arg(path)
                .status()
                .unwrap()
                .code(),
            Some(0)
        );
    }
    assert_ne!(
        read_json(&a)["checks"][0]["residual"],
        read_json(&b)["checks"][0]["residual"]
    );
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let path = scratch("tight.json");
    let out = bin()
        .args(["theta", "--tol", "1e-30", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(read_json(&path)["pass"], false);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# test run\np = 0.27\nq = 0.5\nsamples = 3\n").unwrap();
    let path = scratch("cfg.json");
    let st = bin()
        .args(["theta", "--q", "0.45", "--config"])
        .arg(&cfg)
        .arg("--report")
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let v = read_json(&path);
    assert_eq!(v["params"]["p"], 0.27);
    assert_eq!(v["params"]["q"], 0.45);
    assert_eq!(v["params"]["samples"], 3);
}

#[test]
fn usage_errors_exit_two() {
    let bad_cfg = scratch("bad.cfg");
    std::fs::write(&bad_cfg, "colour = blue\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["nosuch".into()],
        vec![],
        vec!["theta".into(), "--p".into(), "1.5".into()],
        vec!["theta".into(), "--samples".into(), "0".into()],
        vec!["theta".into(), "--n".into(), "9".into()],
        vec!["theta".into(), "--q".into(), "abc".into()],
        vec![
            "theta".into(),
            "--config".into(),
            bad_cfg.display().to_string(),
        ],
        vec![
            "theta".into(),
            "--config".into(),
            "/nonexistent/ellq.cfg".into(),
        ],
    ];
    for args in cases {
        let st = bin().args(&args).output().unwrap().status;
        assert_eq!(st.code(), Some(2), "{args:?}");
    }
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}
