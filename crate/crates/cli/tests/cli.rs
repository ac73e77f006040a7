use std::process::{Command, Output};

fn selfnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfnorm"))
        .args(args)
        .env_remove("SELFNORM_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(selfnorm(&["weights", "--a", "1/3"]).status.code(), Some(0));
    assert_eq!(selfnorm(&["weights", "--a", "0.1"]).status.code(), Some(2));
    assert_eq!(selfnorm(&["verify", "idla-scaled", "--n", "0"]).status.code(), Some(2));
    assert_eq!(selfnorm(&["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(selfnorm(&["weights", "--a", "abc"]).status.code(), Some(2));
    assert_eq!(selfnorm(&["verify", "idla-scaled", "--reps", "10"]).status.code(), Some(2));
    assert_eq!(selfnorm(&["--help"]).status.code(), Some(0));
    assert_eq!(selfnorm(&["--version"]).status.code(), Some(0));
}

#[test]
fn weights_example_row() {
    let o = selfnorm(&["weights", "--a", "1/3"]);
    assert_eq!(stdout(&o), "a,c,b\r\n0.3333333333333333,2.0,0.6666666666666666\r\n");
}

#[test]
fn learning_table_floor_is_printed() {
    let o = selfnorm(&["learning-table", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("minimum horizon 3.218875824868"), "{err}");
}

#[test]
fn json_report_header_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = selfnorm(&[
        "verify", "idla-scaled", "--n", "40", "--reps", "3000", "--seed", "11", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["header"]["seed"], 11);
    assert_eq!(doc["header"]["command"], "verify idla-scaled");
    assert!(doc["header"]["version"].is_string());
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);

    // feed the recorded config back in
    let mut config = doc["header"]["config"].clone();
    config.as_object_mut().unwrap().remove("out");
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, serde_json::to_vec(&config).unwrap()).unwrap();
    let again = selfnorm(&["verify", "idla-scaled", "--config", cfg_path.to_str().unwrap()]);
    let redo: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(redo["rows"], doc["rows"]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"a": "1/3,9/16", "format": "json"}"#).unwrap();
    let o = selfnorm(&["weights", "--config", cfg.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    let o = selfnorm(&["weights", "--config", cfg.to_str().unwrap(), "--a", "1", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 2);

    std::fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(selfnorm(&["weights", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(selfnorm(&["weights", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_selfnorm"));
        c.args(["simulate", "idla", "--n", "30"]).args(extra);
        match env {
            Some(v) => c.env("SELFNORM_SEED", v),
            None => c.env_remove("SELFNORM_SEED"),
        };
        c.output().unwrap()
    };
    let a = run(Some("5"), &[]);
    let b = run(None, &["--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(Some("5"), &["--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(run(Some("five"), &[]).status.code(), Some(2));
}

#[test]
fn simulate_trace_csv() {
    for (process, extra) in [("ar1", "theta"), ("idla", "left"), ("learn", "threshold")] {
        let o = selfnorm(&["simulate", process, "--n", "25", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("k,m,qv,pqv,increment,cond_second_moment"));
        assert!(header.contains(extra));
        assert_eq!(text.lines().count(), 27);
        assert!(text.ends_with("\r\n"));
    }
    let o = selfnorm(&["simulate", "learn", "--n", "10", "--eta", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rational_flags_parse_exactly() {
    let a = selfnorm(&["weights", "--a", "9/16"]);
    let b = selfnorm(&["weights", "--a", "0.5625"]);
    assert_eq!(a.stdout, b.stdout);
}
