use std::path::{Path, PathBuf};

use parkcharge::cli::{main_with_args, RunConfig};

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("parkcharge").chain(args.iter().copied()))
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut full = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let code = run(&full);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

fn config(name: &str) -> String {
    manifest(&format!("configs/{name}")).to_str().unwrap().to_string()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn analyze_reports_reference_utilization() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("linear_exponential.json");
    let (code, text) = run_to(dir.path(), "a.csv", &["analyze", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows = body(&text);
    let header: Vec<&str> = rows[0].split(',').collect();
    let posted: Vec<&str> = rows[1].split(',').collect();
    let col = header.iter().position(|h| *h == "utilization").unwrap();
    let u: f64 = posted[col].parse().unwrap();
    assert!((u - 0.295).abs() < 0.005, "{u}");
}

#[test]
fn outputs_carry_seed_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("linear_exponential.json");
    let (_, text) = run_to(dir.path(), "a.csv", &["analyze", "--config", &cfg, "--seed", "5"]);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# parkcharge analyze seed=5 config_sha256="), "{first}");
    let (_, json) = run_to(dir.path(), "a.json", &["analyze", "--config", &cfg, "--seed", "5", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["meta"]["seed"], 5);
    assert_eq!(doc["meta"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn sweep_columns_and_degenerate_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("linear_exponential.json");
    let (code, text) = run_to(
        dir.path(),
        "s.csv",
        &["sweep", "--config", &cfg, "--grid-min", "0", "--grid-max", "0", "--grid-step", "0.01"],
    );
    assert_eq!(code, 0);
    let rows = body(&text);
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with(
        "alpha_o,qbar,e_tpc_hours,e_to_hours,rho,e_npc,blocking,throughput_per_hour,overstay_frac,utilization,revenue_rate"
    ));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("london_standard.json");
    let args = ["simulate", "--config", &cfg, "--days", "5", "--seed", "3"];
    let (c1, a) = run_to(dir.path(), "one.csv", &args);
    let (c2, b) = run_to(dir.path(), "two.csv", &args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other) = run_to(dir.path(), "three.csv", &["simulate", "--config", &cfg, "--days", "5", "--seed", "4"]);
    assert_ne!(body(&a), body(&other));
}

#[test]
fn learn_starts_round_robin() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("london_standard.json")).unwrap();
    let mut cfg = RunConfig::from_json(&text).unwrap();
    cfg.bandit.prepass_days = 20;
    let path = dir.path().join("learn.json");
    std::fs::write(&path, cfg.to_json()).unwrap();
    let (code, out) = run_to(dir.path(), "l.csv", &["learn", "--config", path.to_str().unwrap(), "--days", "100"]);
    assert_eq!(code, 0);
    let rows = body(&out);
    assert_eq!(rows.len(), 101);
    for (i, row) in rows[1..8].iter().enumerate() {
        let arm: usize = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(arm, i);
    }
}

#[test]
fn learn_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("london_standard.json")).unwrap();
    let mut cfg = RunConfig::from_json(&text).unwrap();
    cfg.bandit.prepass_days = 10;
    cfg.bandit.checkpoint = Some(dir.path().join("state.json"));
    let path = dir.path().join("learn.json");
    std::fs::write(&path, cfg.to_json()).unwrap();
    let p = path.to_str().unwrap();
    let (_, first) = run_to(dir.path(), "a.csv", &["learn", "--config", p, "--days", "4"]);
    let (_, second) = run_to(dir.path(), "b.csv", &["learn", "--config", p, "--days", "4"]);
    let days = |t: &str| body(t)[1..].iter().map(|r| r.split(',').next().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(days(&first), ["1", "2", "3", "4"]);
    assert_eq!(days(&second), ["5", "6", "7", "8"]);
}

#[test]
fn ingest_applies_filter() {
    let dir = tempfile::tempdir().unwrap();
    let events = manifest("tests/fixtures/events.csv");
    let model = dir.path().join("model.json");
    let (code, text) = run_to(
        dir.path(),
        "h.json",
        &[
            "ingest",
            "--events",
            events.to_str().unwrap(),
            "--charger-type",
            "standard",
            "--min-park-min",
            "30",
            "--max-park-min",
            "180",
            "--model-out",
            model.to_str().unwrap(),
            "--format",
            "json",
        ],
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["data"]["rejected"], 2);
    assert!(doc["data"]["kept"].as_u64().unwrap() > 0);
    let fragment: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(model).unwrap()).unwrap();
    assert_eq!(fragment["appointment"]["kind"], "empirical");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["analyze", "--config", "/definitely/missing.json"]), 2);
    assert_eq!(run(&["frobnicate"]), 2);

    let bad_key = dir.path().join("bad.json");
    std::fs::write(&bad_key, r#"{"model": {}, "surprise": 1}"#).unwrap();
    assert_eq!(run(&["analyze", "--config", bad_key.to_str().unwrap()]), 2);

    let cfg = config("linear_exponential.json");
    assert_eq!(run(&["sweep", "--config", &cfg, "--grid-min", "3", "--grid-max", "1"]), 2);

    // every user leaves instantly, so no spot-hours are ever used
    let text = std::fs::read_to_string(&cfg)
        .unwrap()
        .replace(r#"{ "kind": "exponential", "rate_per_hour": 1.3333333333333333 }"#, r#"{ "kind": "degenerate", "value": 0.0 }"#)
        .replace(r#"{ "kind": "exponential", "rate_per_hour": 0.5714285714285714 }"#, r#"{ "kind": "degenerate", "value": 0.0 }"#);
    let degenerate = dir.path().join("degenerate.json");
    std::fs::write(&degenerate, text).unwrap();
    assert_eq!(run(&["analyze", "--config", degenerate.to_str().unwrap()]), 3);

    let csv = dir.path().join("events.csv");
    std::fs::write(&csv, "charger_type,park_duration_min\nstandard,10\n").unwrap();
    assert_eq!(run(&["ingest", "--events", csv.to_str().unwrap()]), 4);
    std::fs::write(&csv, "charger_type,park_duration_min,charge_duration_min\nstandard,10,5\n").unwrap();
    assert_eq!(run(&["ingest", "--events", csv.to_str().unwrap(), "--charger-type", "rapid"]), 4);
}

#[test]
fn validate_passes_on_bundled_configs() {
    for name in ["linear_exponential.json", "london_standard.json", "grace_period.json"] {
        assert_eq!(run(&["validate", "--config", &config(name)]), 0, "{name}");
    }
}

#[test]
fn bundled_configs_round_trip() {
    for name in ["linear_exponential.json", "london_standard.json", "grace_period.json"] {
        let cfg = RunConfig::load(&manifest(&format!("configs/{name}"))).unwrap();
        let again = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.digest(), again.digest());
    }
}
