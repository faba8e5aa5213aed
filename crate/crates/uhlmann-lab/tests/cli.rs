use std::process::Command;

use uhlmann_lab::cli::{run, Scenario, ScenarioConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uhlmann-lab"))
}

fn data(f: &str) -> String {
    format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn every_scenario_passes_with_defaults() {
    for s in Scenario::ALL {
        let cfg = ScenarioConfig::new(s).seed(3).trials(50);
        let r = run(&cfg).unwrap_or_else(|e| panic!("{}: {e}", s.name()));
        assert!(r.pass(), "{}", r.summary());
        assert!(!r.checks.is_empty(), "{} reports no checks", s.name());
    }
}

#[test]
fn same_seed_same_bytes() {
    for args in [vec!["szk", "--seed", "9", "--trials", "100"], vec!["interfere", "--seed", "9", "--trials", "10"]] {
        let a = bin().args(&args).output().unwrap();
        let b = bin().args(&args).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let a = bin().args(["szk", "--seed", "9", "--trials", "100"]).output().unwrap();
    let b = bin().args(["szk", "--seed", "10", "--trials", "100"]).output().unwrap();
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let ok = bin().args(["uhlmann", &data("qutrit.json"), &data("qutrit-tilde.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!((report["metrics"]["op_norm_difference"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    // a scrambler that fails the decoupling precheck is reported, not decoded
    let fail = bin().args(["blackhole", "--seed", "1", "-p", "min_decoupling=1.01", "-p", "tries=1"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(2));
    let undecodable = bin().args(["blackhole", &data("evaporation.json"), "-p", "min_decoupling=1.01"]).output().unwrap();
    assert_eq!(undecodable.status.code(), Some(1));

    for args in [vec!["nonsense"], vec!["amplify"], vec!["entropy", "-p", "k"], vec!["szk", "--seed", "1", "-p", "m=x"], vec!["uhlmann", "/no/such/file"]] {
        assert_eq!(bin().args(&args).output().unwrap().status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("uhlmann-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.json");
    let st = bin().args(["commit", &data("bell-commit.json"), "--out", out.to_str().unwrap()]).output().unwrap();
    assert!(st.status.success() && st.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["scenario"], "commit");
    assert_eq!(v["params"]["k"], 2);
    std::fs::remove_dir_all(dir).unwrap();
}
