use std::path::{Path, PathBuf};
use std::process::Command;

use autlab_cli::config::ExperimentConfig;
use autlab_cli::{builtins_listing, runner};

fn demo_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/demo.json")
}

fn autlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_autlab"))
}

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn demo_config_round_trips() {
    let text = std::fs::read_to_string(demo_path()).unwrap();
    let c = config(&text);
    let again = ExperimentConfig::from_json(&c.to_json()).unwrap();
    assert_eq!(c, again);
    c.validate(demo_path().parent().unwrap()).unwrap();
}

#[test]
fn demo_runs_twice_identically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let status = autlab()
            .arg("run")
            .arg(demo_path())
            .arg("--out-dir")
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    assert!(ta.len() > 10);
    assert_eq!(ta, tb);
}

#[test]
fn parallel_flag_gives_same_tree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path, parallel: bool| {
        let mut cmd = autlab();
        cmd.arg("run").arg(demo_path()).arg("--out-dir").arg(dir);
        if parallel {
            cmd.arg("--parallel");
        }
        assert!(cmd.status().unwrap().success());
    };
    run(a.path(), false);
    run(b.path(), true);
    assert_eq!(read_tree(a.path()), read_tree(b.path()));
}

#[test]
fn complexity_run_writes_csv() {
    let c = config(
        r#"{ "shifts": { "fib": { "kind": "builtin", "name": "fibonacci" } },
             "runs": [ { "name": "p", "op": "complexity", "shift": "fib", "max_n": 10 } ] }"#,
    );
    let out = runner::run_all(&c, Path::new("."), false);
    let rows: Vec<u128> = out[0]
        .contents
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows, (2..=11).collect::<Vec<_>>());
    assert_eq!(out[0].file.as_deref(), Some("p.csv"));
}

#[test]
fn horner_run_reports_length_six() {
    let c = config(r#"{ "runs": [ { "name": "h", "op": "horner_certificate", "m": 5, "n": 2 } ] }"#);
    let out = runner::run_all(&c, Path::new("."), false);
    assert_eq!(out[0].result, "length 6");
    let v: serde_json::Value = serde_json::from_str(&out[0].contents).unwrap();
    assert_eq!(v["length"], 6);
    assert_eq!(v["equals_a_pow_m"], true);
}

#[test]
fn empty_runs_give_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{ "runs": [] }"#).unwrap();
    let out = dir.path().join("out");
    let status = autlab().arg("run").arg(&cfg).arg("--out-dir").arg(&out).status().unwrap();
    assert!(status.success());
    assert_eq!(
        std::fs::read_to_string(out.join("summary.csv")).unwrap(),
        "name,operation,result,verdict\n"
    );
}

#[test]
fn unknown_names_are_reported() {
    let c = config(r#"{ "runs": [ { "name": "x", "op": "complexity", "shift": "nope", "max_n": 3 } ] }"#);
    let err = c.validate(Path::new(".")).unwrap_err().to_string();
    assert!(err.contains("runs[0]") && err.contains("nope"), "{err}");

    let c = config(r#"{ "codes": { "c": { "kind": "compose", "outer": "c", "inner": "c" } } }"#);
    let err = format!("{:#}", c.validate(Path::new(".")).unwrap_err());
    assert!(err.contains("itself"), "{err}");

    let c = config(r#"{ "budgets": { "table_rows": 0 } }"#);
    assert!(c.validate(Path::new(".")).unwrap_err().to_string().contains("budgets"));
}

#[test]
fn malformed_table_names_the_row() {
    let c = config(
        r#"{ "shifts": { "g": { "kind": "builtin", "name": "golden-mean" } },
             "codes": { "bad": { "kind": "table", "shift": "g", "radius": 0, "rows": { "0": "1" } } } }"#,
    );
    let err = format!("{:#}", c.validate(Path::new(".")).unwrap_err());
    assert!(err.contains("code \"bad\"") && err.contains("missing row for window 1"), "{err}");
}

#[test]
fn real_violation_fails_the_batch() {
    let body = r#"{ "name": "e", "op": "entropy_bound_audit",
        "range": { "source": "synthetic", "entries": [0, 1, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4] },
        "complexity": { "source": "synthetic", "values": [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17] }"#;
    let honest = config(&format!(r#"{{ "runs": [ {body} }} ] }}"#));
    let out = runner::run_all(&honest, Path::new("."), false);
    assert_eq!(out[0].verdict, "violation");
    assert!(out[0].failed);

    let fabricated = config(&format!(r#"{{ "runs": [ {body}, "fabricated": true }} ] }}"#));
    let out = runner::run_all(&fabricated, Path::new("."), false);
    assert_eq!(out[0].verdict, "violation (fabricated)");
    assert!(!out[0].failed);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("v.json");
    std::fs::write(&cfg, honest.to_json()).unwrap();
    let status = autlab()
        .arg("run")
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert!(!status.success());
}

#[test]
fn run_errors_fail_the_batch() {
    let c = config(
        r#"{ "shifts": { "f": { "kind": "builtin", "name": "full-2" } },
             "codes": { "s": { "kind": "shift_power", "shift": "f", "j": 1 } },
             "budgets": { "table_rows": 16 },
             "runs": [ { "name": "p", "op": "patches", "code": "s", "n": 4, "k": 4 } ] }"#,
    );
    let out = runner::run_all(&c, Path::new("."), false);
    assert_eq!(out[0].verdict, "error");
    assert!(out[0].failed);
    assert!(out[0].result.contains("cap is 16"), "{}", out[0].result);
}

#[test]
fn budget_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("r.json");
    std::fs::write(
        &cfg,
        r#"{ "shifts": { "f": { "kind": "builtin", "name": "full-2" } },
             "codes": { "s": { "kind": "shift_power", "shift": "f", "j": 1 } },
             "runs": [ { "name": "r", "op": "range_profile", "code": "s", "max_n": 6 } ] }"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = autlab()
        .args(["run", "--budget-tables", "512", "--out-dir"])
        .arg(&out)
        .arg(&cfg)
        .status()
        .unwrap();
    assert!(status.success());
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.ends_with(",truncated\n"), "{summary}");
    assert!(std::fs::read_to_string(out.join("r.csv")).unwrap().contains("# truncated at n=5"));
}

#[test]
fn list_builtins_catalogue() {
    let out = autlab().arg("list-builtins").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, builtins_listing());
    assert!(text.lines().filter(|l| l.starts_with("shift ")).count() >= 4);
    assert!(text.contains("heisenberg"));
    let again = autlab().arg("list-builtins").output().unwrap();
    assert_eq!(again.stdout, text.as_bytes());
}

#[test]
fn validate_subcommand() {
    let ok = autlab().arg("validate").arg(demo_path()).output().unwrap();
    assert!(ok.status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{ "runs": [ { "name": "x", "op": "cyr_kra", "code": "none", "n": 2, "k": 2 } ] }"#).unwrap();
    let bad = autlab().arg("validate").arg(&cfg).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown code \"none\""));
}
